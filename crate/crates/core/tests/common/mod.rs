//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the decoding or search code under test.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spar_core::codes::{LayerWord, SparseParityMatrix, Symbol};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random parity-check matrix with `n` columns, `r < n` rows, no empty rows
/// or columns, and at least two ones per row.
pub fn random_code(rng: &mut impl Rng, n: usize, r: usize) -> SparseParityMatrix {
    assert!(r < n && n >= 2);
    loop {
        let density = rng.random_range(0.15..0.5);
        let mut rows: Vec<Vec<usize>> = (0..r)
            .map(|_| (0..n).filter(|_| rng.random_bool(density)).collect())
            .collect();
        for row in &mut rows {
            while row.len() < 2 {
                let j = rng.random_range(0..n);
                if !row.contains(&j) {
                    row.push(j);
                }
            }
        }
        let mut covered = vec![false; n];
        for row in &rows {
            for &j in row {
                covered[j] = true;
            }
        }
        for (j, c) in covered.iter().enumerate() {
            if !c {
                let i = rng.random_range(0..r);
                rows[i].push(j);
            }
        }
        if let Ok(h) = SparseParityMatrix::from_rows(n, rows) {
            return h;
        }
    }
}

/// [`random_code`] with a uniform row count in `1..n`.
pub fn random_code_any_rows(rng: &mut impl Rng, n: usize) -> SparseParityMatrix {
    let r = rng.random_range(1..n);
    random_code(rng, n, r)
}

pub fn row_masks(h: &SparseParityMatrix) -> Vec<u64> {
    h.rows().iter().map(|row| row.iter().fold(0u64, |m, &j| m | 1 << j)).collect()
}

pub fn mask_of(positions: &[usize]) -> u64 {
    positions.iter().fold(0, |m, &j| m | 1 << j)
}

pub fn positions_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&j| mask >> j & 1 == 1).collect()
}

/// Every check meets `s` in zero or at least two positions.
pub fn is_stopping(rows: &[u64], s: u64) -> bool {
    s != 0 && rows.iter().all(|&r| (r & s).count_ones() != 1)
}

/// Union of all stopping sets inside `e`, i.e. the largest one (0 if none).
pub fn largest_stopping_subset(rows: &[u64], e: u64) -> u64 {
    let mut union = 0;
    let mut sub = e;
    while sub != 0 {
        if sub & !union != 0 && is_stopping(rows, sub) {
            union |= sub;
        }
        sub = (sub - 1) & e;
    }
    union
}

/// Size of the smallest stopping set by scanning every nonempty subset.
pub fn min_stopping_size(rows: &[u64], n: usize) -> Option<u32> {
    let mut best: Option<u32> = None;
    for s in 1u64..(1 << n) {
        let w = s.count_ones();
        if best.is_some_and(|b| w >= b) {
            continue;
        }
        if is_stopping(rows, s) {
            best = Some(w);
        }
    }
    best
}

/// GF(2) rank of the given row bitmasks.
pub fn rank(mut rows: Vec<u64>) -> usize {
    let mut r = 0;
    for bit in 0..64 {
        let Some(p) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[r];
            }
        }
        r += 1;
    }
    r
}

/// Rank of the columns of `h` restricted to `e`.
pub fn erased_rank(rows: &[u64], e: u64) -> usize {
    rank(rows.iter().map(|r| r & e).collect())
}

/// Basis of the null space of `h`, as bitmasks over the columns.
pub fn nullspace(rows: &[u64], n: usize) -> Vec<u64> {
    let mut m: Vec<u64> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for bit in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i] >> bit & 1 == 1) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i] >> bit & 1 == 1 {
                m[i] ^= m[r];
            }
        }
        pivots.push(bit);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = 1u64 << free;
            for (i, &p) in pivots.iter().enumerate() {
                if m[i] >> free & 1 == 1 {
                    v |= 1 << p;
                }
            }
            v
        })
        .collect()
}

/// Random codeword with `len`-byte symbols, one random null-space vector
/// per bit plane.
pub fn random_codeword(rng: &mut impl Rng, h: &SparseParityMatrix, len: usize) -> LayerWord {
    let n = h.n_cols();
    let basis = nullspace(&row_masks(h), n);
    let mut symbols = vec![vec![0u8; len]; n];
    for plane in 0..len * 8 {
        let v = basis.iter().filter(|_| rng.random_bool(0.5)).fold(0u64, |a, b| a ^ b);
        for (j, s) in symbols.iter_mut().enumerate() {
            if v >> j & 1 == 1 {
                s[plane / 8] |= 1 << (plane % 8);
            }
        }
    }
    LayerWord::from_symbols(symbols.into_iter().map(Symbol).collect()).unwrap()
}

/// Uniform `size`-subset of `0..n`.
pub fn random_subset(rng: &mut impl Rng, n: usize, size: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(size);
    all.sort_unstable();
    all
}

pub fn random_symbols(rng: &mut impl Rng, count: usize, len: usize) -> Vec<Symbol> {
    (0..count)
        .map(|_| Symbol((0..len).map(|_| rng.random()).collect()))
        .collect()
}
