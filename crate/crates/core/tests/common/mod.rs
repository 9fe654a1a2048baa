//! Random test corpus: `H = S D S^-1` with prescribed spectral structure.

#![allow(dead_code)]

use kramers::{ComplexMatrix, C64};
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_complex(rng: &mut StdRng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut StdRng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

fn cond(m: &DMatrix<C64>) -> f64 {
    let sv = m.singular_values();
    sv.max() / sv.min()
}

/// Random invertible `S` with condition number at most 50.
pub fn random_similarity(rng: &mut StdRng, n: usize) -> DMatrix<C64> {
    loop {
        let s = DMatrix::<C64>::identity(n, n)
            + random_matrix(rng, n) * c(0.6 / (n as f64).sqrt(), 0.0);
        if cond(&s) <= 50.0 {
            return s;
        }
    }
}

/// One block of the prescribed spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Block {
    Real { value: f64, multiplicity: usize },
    Pair { plus: C64, multiplicity: usize },
    Complex { value: C64, multiplicity: usize },
}

impl Block {
    pub fn size(&self) -> usize {
        match *self {
            Block::Real { multiplicity, .. } | Block::Complex { multiplicity, .. } => multiplicity,
            Block::Pair { multiplicity, .. } => 2 * multiplicity,
        }
    }

    fn values(&self) -> Vec<C64> {
        match *self {
            Block::Real {
                value,
                multiplicity,
            } => vec![c(value, 0.0); multiplicity],
            Block::Pair { plus, multiplicity } => {
                let mut v = vec![plus; multiplicity];
                v.extend(vec![plus.conj(); multiplicity]);
                v
            }
            Block::Complex {
                value,
                multiplicity,
            } => vec![value; multiplicity],
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub h: ComplexMatrix,
    pub blocks: Vec<Block>,
    pub similarity: DMatrix<C64>,
}

impl Sample {
    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn has_odd_real(&self) -> bool {
        self.blocks
            .iter()
            .any(|b| matches!(b, Block::Real { multiplicity, .. } if multiplicity % 2 == 1))
    }

    pub fn pseudohermitian_spectrum(&self) -> bool {
        !self
            .blocks
            .iter()
            .any(|b| matches!(b, Block::Complex { .. }))
    }
}

/// Distinct eigenvalues at least 0.3 apart (and their conjugates too).
fn fresh_value(rng: &mut StdRng, taken: &mut Vec<C64>, real: bool) -> C64 {
    loop {
        let z = if real {
            c(rng.gen_range(-3.0..3.0), 0.0)
        } else {
            c(rng.gen_range(-3.0..3.0), rng.gen_range(0.3..2.0))
        };
        if taken
            .iter()
            .all(|&w| (w - z).norm() >= 0.3 && (w.conj() - z).norm() >= 0.3)
        {
            taken.push(z);
            return z;
        }
    }
}

pub fn assemble(rng: &mut StdRng, blocks: Vec<Block>) -> Sample {
    let values: Vec<C64> = blocks.iter().flat_map(|b| b.values()).collect();
    let n = values.len();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(values));
    let s = random_similarity(rng, n);
    let inv = s.clone().try_inverse().expect("well conditioned");
    let h = ComplexMatrix::new(&s * d * inv).expect("finite");
    Sample {
        h,
        blocks,
        similarity: s,
    }
}

/// Spectrum with only even-degeneracy real eigenvalues and conjugate pairs.
pub fn kramers_sample(rng: &mut StdRng, n: usize) -> Sample {
    assert!(n.is_multiple_of(2));
    let mut taken = Vec::new();
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let block = match rng.gen_range(0..4) {
            0 if left >= 4 => Block::Real {
                value: fresh_value(rng, &mut taken, true).re,
                multiplicity: 4,
            },
            1 | 2 => Block::Real {
                value: fresh_value(rng, &mut taken, true).re,
                multiplicity: 2,
            },
            _ => Block::Pair {
                plus: fresh_value(rng, &mut taken, false),
                multiplicity: if left >= 4 && rng.gen_bool(0.3) { 2 } else { 1 },
            },
        };
        left -= block.size();
        blocks.push(block);
    }
    assemble(rng, blocks)
}

/// Spectrum with at least one odd-degeneracy real eigenvalue. With
/// probability `p_unpaired` one unpaired complex eigenvalue is added too.
pub fn odd_sample(rng: &mut StdRng, n: usize, p_unpaired: f64) -> Sample {
    let mut taken = Vec::new();
    let first = if n >= 3 && rng.gen_bool(0.3) { 3 } else { 1 };
    let mut blocks = vec![Block::Real {
        value: fresh_value(rng, &mut taken, true).re,
        multiplicity: first,
    }];
    let mut left = n - first;
    if left >= 1 && rng.gen_bool(p_unpaired) {
        blocks.push(Block::Complex {
            value: fresh_value(rng, &mut taken, false),
            multiplicity: 1,
        });
        left -= 1;
    }
    while left > 0 {
        let block = if left >= 2 && rng.gen_bool(0.5) {
            if rng.gen_bool(0.5) {
                Block::Pair {
                    plus: fresh_value(rng, &mut taken, false),
                    multiplicity: 1,
                }
            } else {
                Block::Real {
                    value: fresh_value(rng, &mut taken, true).re,
                    multiplicity: 2,
                }
            }
        } else {
            Block::Real {
                value: fresh_value(rng, &mut taken, true).re,
                multiplicity: 1,
            }
        };
        left -= block.size();
        blocks.push(block);
    }
    assemble(rng, blocks)
}

/// The 200-matrix corpus for the forward direction, `n in {2, 4, 6, 8}`.
pub fn forward_corpus() -> Vec<Sample> {
    let mut r = rng(0x5eed_0001);
    (0..200)
        .map(|k| kramers_sample(&mut r, 2 + 2 * (k % 4)))
        .collect()
}

/// The 200-matrix corpus with an odd real degeneracy, `n in 1..=8`.
pub fn necessity_corpus() -> Vec<Sample> {
    let mut r = rng(0x5eed_0002);
    (0..200)
        .map(|k| odd_sample(&mut r, 1 + k % 8, 0.2))
        .collect()
}

/// Basis of `{B : H B = B conj(H)}` from the null space of
/// `1 (x) H - H^dagger (x) 1` acting on column-stacked `B`.
pub fn commutant_basis(h: &ComplexMatrix) -> Vec<DMatrix<C64>> {
    let n = h.dim();
    let hm = h.as_matrix();
    let id = DMatrix::<C64>::identity(n, n);
    let op = id.kronecker(hm) - hm.adjoint().kronecker(&id);
    let svd = op.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let scale = hm.norm().max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= 1e-9 * scale)
        .map(|(k, _)| {
            let col: Vec<C64> = v_t.row(k).iter().map(|z| z.conj()).collect();
            DMatrix::from_column_slice(n, n, &col)
        })
        .collect()
}
