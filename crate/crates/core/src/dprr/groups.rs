//! Same-target grouping of training rows and the ordered pair list it implies.

use std::collections::HashMap;

use log::warn;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default cap on the number of rows in one group that are fully paired.
pub const DEFAULT_GROUP_CAP: usize = 200;

/// Rows partitioned by target user, plus the coupling pairs between them.
///
/// Pairs are stored as consecutive `(i, j), (j, i)` entries, so the reverse of
/// pair `p` is `p ^ 1` and unordered pair `q` owns entries `2q` and `2q + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SameTargetGroups {
    /// Group key (target id) of each group, in order of first appearance.
    pub keys: Vec<usize>,
    /// Row indices of each group.
    pub members: Vec<Vec<usize>>,
    /// Group index of every row.
    pub row_group: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
    /// Indices into `pairs` whose first row is `i`.
    pub row_pairs: Vec<Vec<usize>>,
}

impl SameTargetGroups {
    pub fn n_rows(&self) -> usize {
        self.row_group.len()
    }

    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Number of coupled partners of row `i`.
    pub fn partners(&self, i: usize) -> usize {
        self.row_pairs[i].len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.row_pairs[i].iter().any(|&p| self.pairs[p].1 == j)
    }
}

/// Partitions rows by target id.
///
/// Groups up to `cap` rows are fully coupled (`g(g-1)` ordered pairs). Larger
/// groups are coupled through a seeded circulant graph in which every row has
/// about `cap - 1` partners.
pub fn build_same_target_groups(targets: &[usize], cap: usize, seed: u64) -> SameTargetGroups {
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut keys = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut row_group = Vec::with_capacity(targets.len());
    for (row, &t) in targets.iter().enumerate() {
        let gi = *index.entry(t).or_insert_with(|| {
            keys.push(t);
            members.push(Vec::new());
            members.len() - 1
        });
        members[gi].push(row);
        row_group.push(gi);
    }

    let cap = cap.max(2);
    let mut pairs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (gi, rows) in members.iter().enumerate() {
        let g = rows.len();
        if g <= cap {
            for a in 0..g {
                for b in a + 1..g {
                    pairs.push((rows[a], rows[b]));
                    pairs.push((rows[b], rows[a]));
                }
            }
        } else {
            warn!(
                "target group {} has {g} rows; coupling limited to about {} partners per row",
                keys[gi],
                cap - 1
            );
            let mut order = rows.clone();
            order.shuffle(&mut rng);
            let reach = ((cap - 1) / 2).max(1);
            for a in 0..g {
                for step in 1..=reach {
                    let b = (a + step) % g;
                    pairs.push((order[a], order[b]));
                    pairs.push((order[b], order[a]));
                }
            }
        }
    }

    let mut row_pairs = vec![Vec::new(); targets.len()];
    for (p, &(i, _)) in pairs.iter().enumerate() {
        row_pairs[i].push(p);
    }
    SameTargetGroups {
        keys,
        members,
        row_group,
        pairs,
        row_pairs,
    }
}
