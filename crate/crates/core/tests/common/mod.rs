#![allow(dead_code, clippy::needless_range_loop)]

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tycoon_core::{ChirpTrack, TFGrid, TFMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tfr(grid: TFGrid, rng: &mut ChaCha8Rng) -> TFMatrix {
    let v = Array2::from_shape_fn(grid.shape(), |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    TFMatrix::from_values(grid, v).unwrap()
}

pub fn random_vec(len: usize, rng: &mut ChaCha8Rng) -> Array1<f64> {
    Array1::from_shape_fn(len, |_| rng.random_range(-1.0..1.0))
}

pub fn random_alpha(len: usize, rng: &mut ChaCha8Rng) -> ChirpTrack {
    ChirpTrack::new(random_vec(len, rng)).unwrap()
}

/// Minimum-cost transport between histograms `p` and `q` with cost
/// `|i - j| * bin_width`, solved as a linear program by the two-phase
/// simplex method with Bland's rule.
pub fn lp_transport(p: &[f64], q: &[f64], bin_width: f64) -> f64 {
    let n = p.len();
    let vars = n * n;
    // equality rows: sum_j x_ij = p_i, sum_i x_ij = q_j
    let mut a = vec![vec![0.0; vars]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            a[i][i * n + j] = 1.0;
            a[n + j][i * n + j] = 1.0;
        }
    }
    let b: Vec<f64> = p.iter().chain(q).copied().collect();
    let cost: Vec<f64> = (0..vars)
        .map(|k| ((k / n) as f64 - (k % n) as f64).abs() * bin_width)
        .collect();
    simplex_eq(&a, &b, &cost)
}

/// `min c.x` subject to `A x = b`, `x >= 0`, `b >= 0`.
pub fn simplex_eq(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> f64 {
    let rows = a.len();
    let n = c.len();
    let total = n + rows;
    // tableau with artificials; last column is the right-hand side
    let mut t: Vec<Vec<f64>> = (0..rows)
        .map(|r| {
            let mut row = a[r].clone();
            row.extend((0..rows).map(|k| if k == r { 1.0 } else { 0.0 }));
            row.push(b[r]);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..total).collect();

    let run = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, obj: &[f64], allowed: usize| {
        loop {
            // reduced costs
            let mut enter = None;
            for j in 0..allowed {
                if basis.contains(&j) {
                    continue;
                }
                let mut rc = obj[j];
                for (r, &bv) in basis.iter().enumerate() {
                    rc -= obj[bv] * t[r][j];
                }
                if rc < -1e-12 {
                    enter = Some(j);
                    break;
                }
            }
            let Some(j) = enter else { return };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..t.len() {
                if t[r][j] > 1e-12 {
                    let ratio = t[r][total] / t[r][j];
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((lr, lv)) => {
                            if ratio < lv - 1e-15 || (ratio <= lv + 1e-15 && basis[r] < basis[lr]) {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let (r, _) = leave.expect("bounded program");
            let piv = t[r][j];
            for v in t[r].iter_mut() {
                *v /= piv;
            }
            for k in 0..t.len() {
                if k != r && t[k][j] != 0.0 {
                    let f = t[k][j];
                    for col in 0..=total {
                        let d = f * t[r][col];
                        t[k][col] -= d;
                    }
                }
            }
            basis[r] = j;
        }
    };

    let phase1: Vec<f64> = (0..total).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
    run(&mut t, &mut basis, &phase1, total);
    // drive remaining (zero-valued) artificials out of the basis where possible
    for r in 0..rows {
        if basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| t[r][j].abs() > 1e-9 && !basis.contains(&j)) {
                let piv = t[r][j];
                for v in t[r].iter_mut() {
                    *v /= piv;
                }
                for k in 0..rows {
                    if k != r && t[k][j] != 0.0 {
                        let f = t[k][j];
                        for col in 0..=total {
                            let d = f * t[r][col];
                            t[k][col] -= d;
                        }
                    }
                }
                basis[r] = j;
            }
        }
    }
    let mut phase2: Vec<f64> = c.to_vec();
    phase2.extend(std::iter::repeat_n(1e6, rows));
    run(&mut t, &mut basis, &phase2, n);
    basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv < n)
        .map(|(r, &bv)| c[bv] * t[r][total])
        .sum()
}

pub fn random_histogram(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut h: Vec<f64> = (0..len)
        .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..1.0) })
        .collect();
    if h.iter().all(|&v| v == 0.0) {
        h[0] = 1.0;
    }
    let s: f64 = h.iter().sum();
    h.iter_mut().for_each(|v| *v /= s);
    h
}
