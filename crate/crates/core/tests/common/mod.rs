#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use steerlab::{DirectSumBlock, DirectSumSpec, Observable, PureState, SettingsTriple};

pub type CMat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

pub fn random_pure(rng: &mut ChaCha8Rng) -> PureState {
    PureState::normalized(gaussian_vec(rng, 8), vec![2, 2, 2]).unwrap()
}

pub fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return v.map(|x| x / n);
        }
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Two orthogonal Bloch directions.
pub fn random_mub_pair(rng: &mut ChaCha8Rng) -> [Observable; 2] {
    let n0 = random_direction(rng);
    loop {
        let t = cross(n0, random_direction(rng));
        if let Ok(o) = Observable::new(t) {
            if t.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
                return [Observable::new(n0).unwrap(), o];
            }
        }
    }
}

pub fn random_pair(rng: &mut ChaCha8Rng) -> [Observable; 2] {
    [
        Observable::new(random_direction(rng)).unwrap(),
        Observable::new(random_direction(rng)).unwrap(),
    ]
}

pub fn random_settings(rng: &mut ChaCha8Rng) -> SettingsTriple {
    SettingsTriple::new(random_pair(rng), random_pair(rng), random_mub_pair(rng)).unwrap()
}

pub fn random_qubit(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    let v = gaussian_vec(rng, 2);
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

pub fn random_two_qubit(rng: &mut ChaCha8Rng) -> [Complex64; 4] {
    let v = gaussian_vec(rng, 4);
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
}

pub fn random_product(rng: &mut ChaCha8Rng) -> PureState {
    let a = random_qubit(rng);
    let b = random_qubit(rng);
    let cc = random_qubit(rng);
    let mut amps = Vec::with_capacity(8);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                amps.push(a[i] * b[j] * cc[k]);
            }
        }
    }
    PureState::new(amps, vec![2, 2, 2]).unwrap()
}

/// Random direct-sum spec with up to `max_side` blocks per party; Bob's
/// blocks in one column share an angle.
pub fn random_direct_sum(rng: &mut ChaCha8Rng, max_side: usize) -> DirectSumSpec {
    let n_a = rng.random_range(1..=max_side);
    let n_b = rng.random_range(1..=max_side);
    let mut cells: Vec<(usize, usize)> = (0..n_a.max(n_b)).map(|i| (i % n_a, i % n_b)).collect();
    for u in 0..n_a {
        for v in 0..n_b {
            if !cells.contains(&(u, v)) && rng.random_bool(0.3) {
                cells.push((u, v));
            }
        }
    }
    let thetas: Vec<f64> = (0..n_b).map(|_| rng.random_range(0.05..1.5)).collect();
    let raw: Vec<f64> = cells.iter().map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let head: f64 = weights[1..].iter().sum();
    weights[0] = 1.0 - head;
    DirectSumSpec::new(
        cells
            .iter()
            .zip(&weights)
            .map(|(&(u, v), &w)| DirectSumBlock::at(w, thetas[v], u, v))
            .collect(),
    )
    .unwrap()
}

// Independent reference implementation on nalgebra matrices.

pub fn pauli(n: [f64; 3]) -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[
            c(n[2], 0.0),
            c(n[0], -n[1]),
            c(n[0], n[1]),
            c(-n[2], 0.0),
        ],
    )
}

pub fn proj(o: &Observable, outcome: u8) -> CMat {
    let s = if outcome == 0 { 1.0 } else { -1.0 };
    (CMat::identity(2, 2) + pauli(o.bloch()) * c(s, 0.0)) * c(0.5, 0.0)
}

pub fn to_nalgebra(m: &steerlab::ComplexMatrix) -> CMat {
    CMat::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn ket_density(psi: &[Complex64]) -> CMat {
    let v = CMat::from_column_slice(psi.len(), 1, psi);
    &v * v.adjoint()
}

/// `Tr[ρ (Π_a ⊗ Π_b ⊗ Π_c)]` by full Kronecker products.
pub fn brute_prob(rho: &CMat, s: &SettingsTriple, a: u8, b: u8, cc: u8, x: u8, y: u8, z: u8) -> f64 {
    let op = proj(&s.alice[x as usize], a)
        .kronecker(&proj(&s.bob[y as usize], b))
        .kronecker(&proj(&s.charlie[z as usize], cc));
    (rho * op).trace().re
}

/// The steering functional from brute-force probabilities.
pub fn brute_cp(rho: &CMat, s: &SettingsTriple) -> f64 {
    let terms = [(1, 1, 0, 0, 0), (0, 1, 0, 1, 1), (0, 1, 1, 1, 0), (0, 1, 1, 0, 1)];
    terms
        .iter()
        .map(|&(a, b, x, y, z)| {
            let joint = brute_prob(rho, s, a, b, 0, x, y, z) + brute_prob(rho, s, a, b, 1, x, y, z);
            brute_prob(rho, s, a, b, 0, x, y, z) / joint
        })
        .sum()
}

/// Charlie's unnormalised state by explicit partial trace over A and B.
pub fn brute_conditional(rho: &CMat, pa: &CMat, pb: &CMat) -> CMat {
    let op = pa.kronecker(pb).kronecker(&CMat::identity(2, 2));
    let m = &op * rho * &op;
    let d = pa.nrows() * pb.nrows();
    let mut out = CMat::zeros(2, 2);
    for k in 0..d {
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] += m[(k * 2 + i, k * 2 + j)];
            }
        }
    }
    out
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
