//! Row-weight concentration.
//!
//! Rows of a freshly drawn Bernoulli block have binomially distributed
//! weights. The concentration pass moves single ones from the heaviest row
//! (taking them out of the heaviest column) to the lightest row (into the
//! lightest column it misses) until every row weight in the block is W_min
//! or W_min + 1. Ties are always broken toward the lowest index so the
//! procedure is deterministic.

use std::collections::{BTreeMap, BTreeSet};

type Buckets = BTreeMap<usize, BTreeSet<u32>>;

fn bucket_insert(buckets: &mut Buckets, weight: usize, idx: u32) {
    buckets.entry(weight).or_default().insert(idx);
}

fn bucket_remove(buckets: &mut Buckets, weight: usize, idx: u32) {
    let set = buckets.get_mut(&weight).expect("bucket exists");
    set.remove(&idx);
    if set.is_empty() {
        buckets.remove(&weight);
    }
}

struct BitRows {
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitRows {
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    fn row(&self, t: usize) -> &[u64] {
        &self.words[t * self.words_per_row..(t + 1) * self.words_per_row]
    }

    fn get(&self, t: usize, j: usize) -> bool {
        self.words[t * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, t: usize, j: usize, value: bool) {
        let word = &mut self.words[t * self.words_per_row + j / 64];
        if value {
            *word |= 1 << (j % 64);
        } else {
            *word &= !(1 << (j % 64));
        }
    }
}

fn for_each_set_bit(row: &[u64], mut f: impl FnMut(usize)) {
    for (wi, &word) in row.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            f(wi * 64 + word.trailing_zeros() as usize);
            word &= word - 1;
        }
    }
}

/// Concentrate the row weights of one block in place.
///
/// `block` holds the incremental rows for one rate subinterval as sorted
/// column-index lists. `col_weight` is the column-weight view over the whole
/// matrix built so far — earlier blocks plus this one — and is kept
/// consistent as ones move. On return the block's max and min row weights
/// differ by at most 1 and the total number of ones is unchanged.
pub fn row_weight_concentrate(block: &mut [Vec<u32>], col_weight: &mut [u32]) {
    let k = col_weight.len();
    if block.is_empty() || k == 0 {
        return;
    }

    let mut bits = BitRows::new(block.len(), k);
    let mut row_buckets: Buckets = BTreeMap::new();
    for (t, row) in block.iter().enumerate() {
        for &j in row.iter() {
            debug_assert!((j as usize) < k);
            bits.set(t, j as usize, true);
        }
        bucket_insert(&mut row_buckets, row.len(), t as u32);
    }
    let mut col_buckets: Buckets = BTreeMap::new();
    for (j, &w) in col_weight.iter().enumerate() {
        bucket_insert(&mut col_buckets, w as usize, j as u32);
    }

    loop {
        let (&w_max, heavy) = row_buckets.last_key_value().expect("nonempty");
        let (&w_min, light) = row_buckets.first_key_value().expect("nonempty");
        if w_max <= w_min + 1 {
            break;
        }
        let t1 = *heavy.first().expect("nonempty bucket") as usize;
        let t0 = *light.first().expect("nonempty bucket") as usize;

        // Heaviest column among the ones of row t1 (lowest index on ties).
        let mut j1 = usize::MAX;
        let mut j1_weight = 0u32;
        for_each_set_bit(bits.row(t1), |j| {
            if j1 == usize::MAX || col_weight[j] > j1_weight {
                j1 = j;
                j1_weight = col_weight[j];
            }
        });
        debug_assert_ne!(j1, usize::MAX, "max-weight row has at least two ones");

        // Lightest column with a zero in row t0 (lowest index on ties).
        let mut j0 = usize::MAX;
        'search: for cols in col_buckets.values() {
            for &j in cols.iter() {
                if !bits.get(t0, j as usize) {
                    j0 = j as usize;
                    break 'search;
                }
            }
        }
        debug_assert_ne!(j0, usize::MAX, "min-weight row has at least one zero");

        // Move the 1 from (t1, j1) to (t0, j0).
        bits.set(t1, j1, false);
        bits.set(t0, j0, true);
        bucket_remove(&mut row_buckets, w_max, t1 as u32);
        bucket_insert(&mut row_buckets, w_max - 1, t1 as u32);
        bucket_remove(&mut row_buckets, w_min, t0 as u32);
        bucket_insert(&mut row_buckets, w_min + 1, t0 as u32);
        if j0 != j1 {
            bucket_remove(&mut col_buckets, col_weight[j1] as usize, j1 as u32);
            bucket_insert(&mut col_buckets, col_weight[j1] as usize - 1, j1 as u32);
            bucket_remove(&mut col_buckets, col_weight[j0] as usize, j0 as u32);
            bucket_insert(&mut col_buckets, col_weight[j0] as usize + 1, j0 as u32);
            col_weight[j1] -= 1;
            col_weight[j0] += 1;
        }
    }

    for (t, row) in block.iter_mut().enumerate() {
        row.clear();
        for_each_set_bit(bits.row(t), |j| row.push(j as u32));
    }
}
