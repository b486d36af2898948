// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense matrix exponential by scaling and squaring with diagonal Padé
//! approximants (Higham, SIAM J. Matrix Anal. Appl. 26, 1179 (2005)).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_230e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const PADE_9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

type CMat = DMatrix<Complex64>;

fn one_norm(a: &CMat) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Returns `exp(a)` for a square matrix with finite entries.
pub fn expm_matrix(a: &CMat) -> Result<CMat> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite("matrix exponential argument"));
    }
    let n = a.nrows();
    let ident = CMat::identity(n, n);
    let norm = one_norm(a);
    if norm == 0.0 {
        return Ok(ident);
    }

    let low_order: [(f64, &[f64]); 4] = [
        (THETA_3, &PADE_3),
        (THETA_5, &PADE_5),
        (THETA_7, &PADE_7),
        (THETA_9, &PADE_9),
    ];
    for (theta, coeffs) in low_order {
        if norm <= theta {
            return pade_low(a, coeffs, &ident);
        }
    }

    let squarings = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a * real(0.5f64.powi(squarings));
    let mut result = pade_13(&scaled, &ident)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Padé approximant of degree 3, 5, 7 or 9 without scaling.
fn pade_low(a: &CMat, b: &[f64], ident: &CMat) -> Result<CMat> {
    let a2 = a * a;
    let degree = b.len() - 1;
    // Even powers A^0, A^2, ..., A^(degree-1).
    let mut powers = vec![ident.clone()];
    for _ in 1..=(degree / 2) {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = CMat::zeros(a.nrows(), a.ncols());
    let mut even = CMat::zeros(a.nrows(), a.ncols());
    for (k, p) in powers.iter().enumerate() {
        if 2 * k < degree {
            odd += p * real(b[2 * k + 1]);
        }
        even += p * real(b[2 * k]);
    }
    let u = a * odd;
    solve_pade(&u, &even)
}

fn pade_13(a: &CMat, ident: &CMat) -> Result<CMat> {
    let b = &PADE_13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * real(b[13]) + &a4 * real(b[11]) + &a2 * real(b[9]))
        + &a6 * real(b[7])
        + &a4 * real(b[5])
        + &a2 * real(b[3])
        + ident * real(b[1]);
    let u = a * inner_u;
    let v = &a6 * (&a6 * real(b[12]) + &a4 * real(b[10]) + &a2 * real(b[8]))
        + &a6 * real(b[6])
        + &a4 * real(b[4])
        + &a2 * real(b[2])
        + ident * real(b[0]);
    solve_pade(&u, &v)
}

/// Solves `(V − U) X = (V + U)`.
fn solve_pade(u: &CMat, v: &CMat) -> Result<CMat> {
    let lhs = v - u;
    let rhs = v + u;
    lhs.lu()
        .solve(&rhs)
        .ok_or(Error::NonFinite("singular Padé denominator"))
}
