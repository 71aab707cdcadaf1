//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls the library's product, sign table or FFT path.
#![allow(dead_code)]

use std::f64::consts::PI;

use clifwave::field::{GridSpec, MultivectorField};
use clifwave::{AlgebraDim, Multivector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator indices of a blade name such as `"e13"`; `"1"` is the empty set.
fn generators(name: &str) -> Vec<u8> {
    if name == "1" {
        return Vec::new();
    }
    name.trim_start_matches('e')
        .chars()
        .map(|c| c.to_digit(10).expect("blade digit") as u8)
        .collect()
}

/// Product of two basis blades by concatenating generator lists, bubble
/// sorting with a sign flip per swap and cancelling `e_k e_k = +1`.
pub fn blade_product(a: &[u8], b: &[u8]) -> (Vec<u8>, f64) {
    let mut word: Vec<u8> = a.iter().chain(b).copied().collect();
    let mut sign = 1.0;
    let len = word.len();
    for i in 0..len {
        for j in 0..len - 1 - i {
            if word[j] > word[j + 1] {
                word.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let mut out = Vec::with_capacity(len);
    let mut k = 0;
    while k < word.len() {
        if k + 1 < word.len() && word[k] == word[k + 1] {
            k += 2;
        } else {
            out.push(word[k]);
            k += 1;
        }
    }
    (out, sign)
}

/// Sign table `table[i][j] = (index, sign)` with `e_i e_j = sign e_index`,
/// indices following the library's blade names.
pub fn sign_table(dim: AlgebraDim) -> Vec<Vec<(usize, f64)>> {
    let names = dim.blade_names();
    let gens: Vec<Vec<u8>> = names.iter().map(|n| generators(n)).collect();
    gens.iter()
        .map(|a| {
            gens.iter()
                .map(|b| {
                    let (word, sign) = blade_product(a, b);
                    let idx = gens.iter().position(|g| *g == word).expect("closed basis");
                    (idx, sign)
                })
                .collect()
        })
        .collect()
}

/// Geometric product from the oracle sign table.
pub fn product(table: &[Vec<(usize, f64)>], dim: AlgebraDim, a: &Multivector, b: &Multivector) -> Multivector {
    let m = dim.blade_count();
    let mut out = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            let (k, s) = table[i][j];
            out[k] += s * a.coeff(i) * b.coeff(j);
        }
    }
    Multivector::from_coeffs(dim, &out).unwrap()
}

/// Reverse by grade sign `(-1)^{k(k-1)/2}` counted from the blade name.
pub fn reverse(dim: AlgebraDim, a: &Multivector) -> Multivector {
    let out: Vec<f64> = dim
        .blade_names()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let k = generators(name).len();
            let s = if (k * (k.saturating_sub(1)) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            s * a.coeff(i)
        })
        .collect();
    Multivector::from_coeffs(dim, &out).unwrap()
}

pub fn random_multivector(rng: &mut impl Rng, dim: AlgebraDim) -> Multivector {
    let c: Vec<f64> = (0..dim.blade_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
    Multivector::from_coeffs(dim, &c).unwrap()
}

pub fn random_field(rng: &mut impl Rng, dim: AlgebraDim, grid: &GridSpec) -> MultivectorField {
    let data = (0..grid.len()).map(|_| random_multivector(rng, dim)).collect();
    MultivectorField::new(dim, grid.clone(), data).unwrap()
}

/// `cos φ + i_n sin φ` with `i_n` the top blade of the oracle basis.
fn exp_pseudo(dim: AlgebraDim, phi: f64) -> Multivector {
    let mut c = vec![0.0; dim.blade_count()];
    c[0] = phi.cos();
    c[dim.blade_count() - 1] = phi.sin();
    Multivector::from_coeffs(dim, &c).unwrap()
}

/// Direct summation `Σ_x f(x) e^{-i_n ω·x} ΠΔx` at every node of the
/// frequency grid `ω_m = 2π m / L`, `m` centered.
pub fn direct_forward(f: &MultivectorField) -> Vec<Multivector> {
    let dim = f.dim();
    let table = sign_table(dim);
    let grid = f.grid();
    let n = grid.n();
    let freq = frequency_nodes(grid);
    let cell: f64 = (0..n).map(|k| grid.spacing(k)).product();
    freq.iter()
        .map(|w| {
            let mut acc = Multivector::zero(dim);
            for (flat, v) in f.data().iter().enumerate() {
                let x = grid.point(flat);
                let phase: f64 = (0..n).map(|k| w[k] * x[k]).sum();
                acc += product(&table, dim, v, &exp_pseudo(dim, -phase)) * cell;
            }
            acc
        })
        .collect()
}

/// Direct summation `(2π)^{-n} Σ_ω F(ω) e^{i_n ω·x} ΠΔω` at every spatial node.
pub fn direct_inverse(spectrum: &[Multivector], grid: &GridSpec) -> Vec<Multivector> {
    let dim = spectrum[0].dim();
    let table = sign_table(dim);
    let n = grid.n();
    let freq = frequency_nodes(grid);
    let dw: f64 = (0..n).map(|k| 2.0 * PI / grid.extent(k)).product();
    let scale = dw / (2.0 * PI).powi(n as i32);
    (0..grid.len())
        .map(|flat| {
            let x = grid.point(flat);
            let mut acc = Multivector::zero(dim);
            for (w, v) in freq.iter().zip(spectrum) {
                let phase: f64 = (0..n).map(|k| w[k] * x[k]).sum();
                acc += product(&table, dim, v, &exp_pseudo(dim, phase)) * scale;
            }
            acc
        })
        .collect()
}

/// Frequency nodes in the flat order of `grid`.
pub fn frequency_nodes(grid: &GridSpec) -> Vec<[f64; 3]> {
    let n = grid.n();
    (0..grid.len())
        .map(|flat| {
            let idx = grid.multi_index(flat);
            let mut w = [0.0; 3];
            for k in 0..n {
                let s = grid.samples()[k] as i64;
                let m = idx[k] as i64 - s / 2;
                w[k] = 2.0 * PI * m as f64 / grid.extent(k);
            }
            w
        })
        .collect()
}

pub fn max_abs_diff(a: &[Multivector], b: &[Multivector]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |acc, (x, y)| acc.max((*x - *y).max_abs()))
}

pub fn max_abs(a: &[Multivector]) -> f64 {
    a.iter().fold(0.0_f64, |acc, x| acc.max(x.max_abs()))
}
