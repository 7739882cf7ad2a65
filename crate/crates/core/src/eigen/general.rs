//! Eigenvalues of general real matrices: diagonal balancing, Householder
//! reduction to upper Hessenberg form, then Francis double-shift QR.

#![allow(clippy::needless_range_loop)]

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const RADIX: f64 = 2.0;

/// Parlett–Reinsch balancing by powers of two (similarity, exact in floating point).
pub fn balance(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let gi = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= gi;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Orthogonal similarity reduction to upper Hessenberg form, in place.
pub fn hessenberg(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let len = n - k - 1;
        let norm = (0..len).map(|i| a[(k + 1 + i, k)].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for j in 0..n {
            let s: f64 = (0..len).map(|i| v[i] * a[(k + 1 + i, j)]).sum();
            let f = 2.0 * s / vv;
            for i in 0..len {
                a[(k + 1 + i, j)] -= f * v[i];
            }
        }
        for i in 0..n {
            let s: f64 = (0..len).map(|j| a[(i, k + 1 + j)] * v[j]).sum();
            let f = 2.0 * s / vv;
            for j in 0..len {
                a[(i, k + 1 + j)] -= f * v[j];
            }
        }
        a[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            a[(i, k)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix. `max_iterations`
/// bounds the total number of QR steps across all deflations.
pub fn hessenberg_qr_eigenvalues(h: &DMatrix<f64>, max_iterations: usize) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    // 1-based working copy keeps the index arithmetic of the classical algorithm.
    let mut a = vec![vec![0.0f64; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = h[(i, j)];
        }
    }
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }

    let mut total = 0usize;
    let mut nn = n as isize;
    let mut t = 0.0;
    macro_rules! m {
        ($i:expr, $j:expr) => {
            a[($i) as usize][($j) as usize]
        };
    }

    while nn >= 1 {
        let mut its = 0usize;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = m!(l - 1, l - 1).abs() + m!(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if m!(l, l - 1).abs() + s == s {
                    m!(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = m!(nn, nn);
            if l == nn {
                wr[nn as usize] = x + t;
                wi[nn as usize] = 0.0;
                nn -= 1;
            } else {
                let mut y = m!(nn - 1, nn - 1);
                let mut w = m!(nn, nn - 1) * m!(nn - 1, nn);
                if l == nn - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    let (i1, i2) = ((nn - 1) as usize, nn as usize);
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[i1] = x + z;
                        wr[i2] = x + z;
                        if z != 0.0 {
                            wr[i2] = x - w / z;
                        }
                        wi[i1] = 0.0;
                        wi[i2] = 0.0;
                    } else {
                        wr[i1] = x + p;
                        wr[i2] = x + p;
                        wi[i1] = -z;
                        wi[i2] = z;
                    }
                    nn -= 2;
                } else {
                    if total >= max_iterations {
                        return Err(Error::NoConvergence {
                            block_start: (l - 1) as usize,
                            block_end: (nn - 1) as usize,
                            iterations: total,
                        });
                    }
                    if its > 0 && its.is_multiple_of(10) {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            m!(i, i) -= x;
                        }
                        let s = m!(nn, nn - 1).abs() + m!(nn - 1, nn - 2).abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    total += 1;

                    let mut mm = nn - 2;
                    let (mut p, mut q, mut r, mut z);
                    loop {
                        z = m!(mm, mm);
                        r = x - z;
                        let s0 = y - z;
                        p = (r * s0 - w) / m!(mm + 1, mm) + m!(mm, mm + 1);
                        q = m!(mm + 1, mm + 1) - z - r - s0;
                        r = m!(mm + 2, mm + 1);
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if mm == l {
                            break;
                        }
                        let u = m!(mm, mm - 1).abs() * (q.abs() + r.abs());
                        let v = p.abs() * (m!(mm - 1, mm - 1).abs() + z.abs() + m!(mm + 1, mm + 1).abs());
                        if u + v == v {
                            break;
                        }
                        mm -= 1;
                    }
                    for i in (mm + 2)..=nn {
                        m!(i, i - 2) = 0.0;
                        if i != mm + 2 {
                            m!(i, i - 3) = 0.0;
                        }
                    }
                    let mut k = mm;
                    while k < nn {
                        if k != mm {
                            p = m!(k, k - 1);
                            q = m!(k + 1, k - 1);
                            r = 0.0;
                            if k != nn - 1 {
                                r = m!(k + 2, k - 1);
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == mm {
                                if l != mm {
                                    m!(k, k - 1) = -m!(k, k - 1);
                                }
                            } else {
                                m!(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = m!(k, j) + q * m!(k + 1, j);
                                if k != nn - 1 {
                                    p += r * m!(k + 2, j);
                                    m!(k + 2, j) -= p * z;
                                }
                                m!(k + 1, j) -= p * y;
                                m!(k, j) -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * m!(i, k) + y * m!(i, k + 1);
                                if k != nn - 1 {
                                    p += z * m!(i, k + 2);
                                    m!(i, k + 2) -= p * r;
                                }
                                m!(i, k + 1) -= p * q;
                                m!(i, k) -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

/// Balanced Hessenberg form of `a` and its eigenvalues.
pub fn general_eigenvalues(a: &DMatrix<f64>, max_iterations: usize) -> Result<(DMatrix<f64>, Vec<Complex64>)> {
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let values = hessenberg_qr_eigenvalues(&h, max_iterations)?;
    Ok((h, values))
}

/// Backward-error estimate `‖Hv − λv‖ / (‖H‖ ‖v‖)` for an approximate
/// eigenvalue, using two steps of inverse iteration on the Hessenberg form.
pub fn hessenberg_residual(h: &DMatrix<f64>, lambda: Complex64) -> f64 {
    let n = h.nrows();
    let norm = h.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    if n == 0 || norm == 0.0 {
        return 0.0;
    }
    let shift = lambda + Complex64::new(1e-14 * norm, 0.0);
    let tiny = f64::EPSILON * norm;

    // LU of the shifted Hessenberg matrix with adjacent-row pivoting.
    let mut u: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { shift } else { Complex64::new(0.0, 0.0) };
                    Complex64::new(h[(i, j)], 0.0) - d
                })
                .collect()
        })
        .collect();
    let mut ops: Vec<(bool, Complex64)> = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        let swap = u[k + 1][k].norm() > u[k][k].norm();
        if swap {
            u.swap(k, k + 1);
        }
        if u[k][k].norm() == 0.0 {
            u[k][k] = Complex64::new(tiny, 0.0);
        }
        let factor = u[k + 1][k] / u[k][k];
        for j in k..n {
            let ukj = u[k][j];
            u[k + 1][j] -= factor * ukj;
        }
        ops.push((swap, factor));
    }
    if u[n - 1][n - 1].norm() == 0.0 {
        u[n - 1][n - 1] = Complex64::new(tiny, 0.0);
    }

    let solve = |rhs: &mut Vec<Complex64>| {
        for (k, &(swap, factor)) in ops.iter().enumerate() {
            if swap {
                rhs.swap(k, k + 1);
            }
            let rk = rhs[k];
            rhs[k + 1] -= factor * rk;
        }
        for i in (0..n).rev() {
            let mut s = rhs[i];
            for j in (i + 1)..n {
                s -= u[i][j] * rhs[j];
            }
            rhs[i] = s / u[i][i];
        }
    };

    let mut v: Vec<Complex64> =
        (0..n).map(|i| Complex64::new(1.0 + 0.1 * (i as f64).sin(), 0.05 * (i as f64).cos())).collect();
    for _ in 0..2 {
        solve(&mut v);
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(nv.is_finite() && nv > 0.0) {
            return f64::INFINITY;
        }
        for z in &mut v {
            *z /= nv;
        }
    }
    let r = (0..n)
        .map(|i| {
            let hv: Complex64 = (0..n).map(|j| v[j] * h[(i, j)]).sum();
            (hv - lambda * v[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    r / norm
}
