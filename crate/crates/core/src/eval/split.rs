//! Seeded train/test sampling and k-fold partitions.

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::Dataset;

/// Size of the test sample for a train size and a test ratio in percent.
pub fn test_size(train_size: usize, test_ratio_percent: u32) -> usize {
    (train_size as u64 * test_ratio_percent as u64 + 50) as usize / 100
}

/// Disjoint uniform samples without replacement: `train_size` training rows
/// and `train_size * ratio / 100` test rows.
pub fn sample_split_indices(
    n: usize,
    train_size: usize,
    test_ratio_percent: u32,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let test = test_size(train_size, test_ratio_percent);
    if train_size == 0 {
        return Err(Error::Config("train size must be >= 1".into()));
    }
    if train_size + test > n {
        return Err(Error::Dataset(format!(
            "need {} rows for {train_size} train + {test} test, have {n}",
            train_size + test
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = index::sample(&mut rng, n, train_size + test).into_vec();
    let (tr, te) = picked.split_at(train_size);
    Ok((tr.to_vec(), te.to_vec()))
}

pub fn sample_split(ds: &Dataset, train_size: usize, test_ratio_percent: u32, seed: u64) -> Result<(Dataset, Dataset)> {
    let (tr, te) = sample_split_indices(ds.len(), train_size, test_ratio_percent, seed)?;
    Ok((ds.subset(&tr), ds.subset(&te)))
}

/// Shuffled near-equal folds of `0..n`.
pub fn kfold(n: usize, folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::Config("cross-validation needs at least 2 folds".into()));
    }
    if n < folds {
        return Err(Error::Dataset(format!("{n} rows cannot form {folds} folds")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut out = vec![Vec::new(); folds];
    for (pos, i) in idx.into_iter().enumerate() {
        out[pos % folds].push(i);
    }
    Ok(out)
}

/// Derives an independent seed for stream `k`.
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
