//! Dense GF(2) matrices packed into 64-bit words.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        let words = n_cols.div_ceil(64);
        Self {
            n_rows,
            n_cols,
            words,
            data: vec![0; n_rows * words],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if bit {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] ^= 1 << (j % 64);
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Iterates over the column indices set in row `i`.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i).iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * w);
        head[lo * w..(lo + 1) * w].swap_with_slice(&mut tail[..w]);
    }

    /// `row[dst] ^= row[src]`, touching only words from `from_word` on.
    fn xor_row_into(&mut self, src: usize, dst: usize, from_word: usize) {
        let w = self.words;
        let (s, d) = (src * w, dst * w);
        if s < d {
            let (head, tail) = self.data.split_at_mut(d);
            for (x, y) in tail[from_word..w].iter_mut().zip(&head[s + from_word..s + w]) {
                *x ^= *y;
            }
        } else {
            let (head, tail) = self.data.split_at_mut(s);
            for (x, y) in head[d + from_word..d + w].iter_mut().zip(&tail[from_word..w]) {
                *x ^= *y;
            }
        }
    }

    /// Gauss-Jordan elimination choosing pivots only among the first
    /// `pivot_cols` columns. Rows are permuted so that row `i` holds the
    /// `i`-th pivot. Returns the pivot columns in order; their count is the
    /// rank of the left block.
    pub fn reduce(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..pivot_cols.min(self.n_cols) {
            if next_row == self.n_rows {
                break;
            }
            let Some(p) = (next_row..self.n_rows).find(|&i| self.get(i, col)) else {
                continue;
            };
            self.swap_rows(p, next_row);
            let from_word = col / 64;
            for i in 0..self.n_rows {
                if i != next_row && self.get(i, col) {
                    self.xor_row_into(next_row, i, from_word);
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce(self.n_cols).len()
    }
}
