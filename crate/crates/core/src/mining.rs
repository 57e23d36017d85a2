//! Frequent conjunction mining with FP-growth.
//!
//! Transactions are rows of a [`BinarizedDataset`]; items are its literal
//! columns. Itemsets holding two literals on the same attribute are never
//! grown, since such conjunctions are unsatisfiable or redundant.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::{BinarizedDataset, Label};
use crate::error::Result;
use crate::patterns::Pattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MiningScope {
    /// Mine only rows labelled positive.
    #[default]
    PositivesOnly,
    AllRows,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpNode {
    pub item: usize,
    pub count: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Prefix tree of transactions with items in descending global frequency.
#[derive(Clone, Debug)]
pub struct FpTree {
    /// `nodes[0]` is the root, which carries no item.
    pub nodes: Vec<FpNode>,
    /// Frequent items, most frequent first (ties by item id).
    pub order: Vec<usize>,
    /// Per item: the nodes holding it, in insertion order.
    pub header: BTreeMap<usize, Vec<usize>>,
}

impl FpTree {
    fn with_order(order: Vec<usize>) -> Self {
        FpTree {
            nodes: vec![FpNode {
                item: usize::MAX,
                count: 0,
                parent: None,
                children: Vec::new(),
            }],
            header: order.iter().map(|&i| (i, Vec::new())).collect(),
            order,
        }
    }

    fn insert(&mut self, sorted_items: &[usize], count: usize) {
        let mut cur = 0;
        for &item in sorted_items {
            let next = self.nodes[cur]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].item == item);
            cur = match next {
                Some(c) => {
                    self.nodes[c].count += count;
                    c
                }
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(FpNode {
                        item,
                        count,
                        parent: Some(cur),
                        children: Vec::new(),
                    });
                    self.nodes[cur].children.push(id);
                    self.header.get_mut(&item).expect("frequent item").push(id);
                    id
                }
            };
        }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    /// Sum of counts along the item's header chain.
    pub fn item_count(&self, item: usize) -> usize {
        self.header
            .get(&item)
            .map_or(0, |chain| chain.iter().map(|&n| self.nodes[n].count).sum())
    }

    /// Items from the node's parent up to (excluding) the root.
    fn prefix_path(&self, node: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = self.nodes[node].parent;
        while let Some(c) = cur {
            if c == 0 {
                break;
            }
            path.push(self.nodes[c].item);
            cur = self.nodes[c].parent;
        }
        path.reverse();
        path
    }
}

fn build_weighted(transactions: &[(Vec<usize>, usize)], min_count: usize) -> FpTree {
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for (t, w) in transactions {
        for &i in t {
            *freq.entry(i).or_default() += w;
        }
    }
    let mut order: Vec<usize> = freq
        .iter()
        .filter(|&(_, &c)| c >= min_count)
        .map(|(&i, _)| i)
        .collect();
    order.sort_by(|a, b| freq[b].cmp(&freq[a]).then(a.cmp(b)));
    let rank: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let mut tree = FpTree::with_order(order);
    let mut buf = Vec::new();
    for (t, w) in transactions {
        buf.clear();
        buf.extend(t.iter().copied().filter(|i| rank.contains_key(i)));
        buf.sort_by_key(|i| rank[i]);
        buf.dedup();
        if !buf.is_empty() {
            tree.insert(&buf, *w);
        }
    }
    tree
}

/// Builds the tree over items with frequency `>= min_count`.
pub fn build_fptree(transactions: &[Vec<usize>], min_count: usize) -> FpTree {
    let weighted: Vec<(Vec<usize>, usize)> = transactions.iter().map(|t| (t.clone(), 1)).collect();
    build_weighted(&weighted, min_count.max(1))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MinedPattern {
    /// Sorted column ids.
    pub items: Vec<usize>,
    pub count: usize,
}

impl MinedPattern {
    pub fn to_pattern(&self, b: &BinarizedDataset) -> Result<Pattern> {
        Pattern::new(self.items.iter().map(|&i| b.columns[i].clone()))
    }
}

struct Miner<'a> {
    item_attr: &'a [usize],
    min_count: usize,
    max_len: usize,
    out: Vec<MinedPattern>,
}

impl Miner<'_> {
    fn grow(&mut self, tree: &FpTree, suffix: &mut Vec<usize>) {
        for &item in tree.order.iter().rev() {
            let count = tree.item_count(item);
            if count < self.min_count {
                continue;
            }
            suffix.push(item);
            let mut items = suffix.clone();
            items.sort_unstable();
            self.out.push(MinedPattern { items, count });
            if suffix.len() < self.max_len {
                let attrs: Vec<usize> = suffix.iter().map(|&i| self.item_attr[i]).collect();
                let base: Vec<(Vec<usize>, usize)> = tree.header[&item]
                    .iter()
                    .map(|&n| {
                        let path: Vec<usize> = tree
                            .prefix_path(n)
                            .into_iter()
                            .filter(|i| !attrs.contains(&self.item_attr[*i]))
                            .collect();
                        (path, tree.nodes[n].count)
                    })
                    .filter(|(p, _)| !p.is_empty())
                    .collect();
                if !base.is_empty() {
                    let cond = build_weighted(&base, self.min_count);
                    if !cond.is_empty() {
                        self.grow(&cond, suffix);
                    }
                }
            }
            suffix.pop();
        }
    }
}

/// Every conflict-free itemset of size `<= max_len` with support count
/// `>= min_count`, ordered by size then item ids. `item_attr[i]` is the
/// attribute of item `i`.
pub fn mine_transactions(
    transactions: &[Vec<usize>],
    item_attr: &[usize],
    min_count: usize,
    max_len: usize,
) -> Vec<MinedPattern> {
    let min_count = min_count.max(1);
    if max_len == 0 {
        return Vec::new();
    }
    // a transaction never holds two items of one attribute in the same set
    let tree = build_fptree(transactions, min_count);
    let mut miner = Miner {
        item_attr,
        min_count,
        max_len,
        out: Vec::new(),
    };
    miner.grow(&tree, &mut Vec::new());
    let mut out = miner.out;
    out.sort_by(|a, b| {
        a.items
            .len()
            .cmp(&b.items.len())
            .then_with(|| a.items.cmp(&b.items))
    });
    out
}

/// `ceil(fraction * n)` with a small allowance for rounding in the product.
pub fn min_count_for(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64) - 1e-9).ceil().max(1.0) as usize
}

/// The transaction rows for a scope.
pub fn transaction_rows(labels: &[Label], scope: MiningScope) -> Vec<usize> {
    (0..labels.len())
        .filter(|&n| scope == MiningScope::AllRows || labels[n].is_positive())
        .collect()
}

/// Mines the binarized rows selected by `scope`.
pub fn mine(
    b: &BinarizedDataset,
    labels: &[Label],
    min_support: f64,
    max_len: usize,
    scope: MiningScope,
) -> Vec<MinedPattern> {
    assert!(
        min_support > 0.0 && min_support <= 1.0,
        "min_support must be in (0, 1]"
    );
    let rows = transaction_rows(labels, scope);
    let transactions: Vec<Vec<usize>> = rows.iter().map(|&n| b.row_items(n)).collect();
    let item_attr: Vec<usize> = b.columns.iter().map(|l| l.attr()).collect();
    let min_count = min_count_for(min_support, transactions.len());
    mine_transactions(&transactions, &item_attr, min_count, max_len)
}

/// Raises the user's support threshold to the positive-support floor
/// `(C1 + C2) * N` below which a pattern can never help the objective.
/// Only meaningful when mining positives.
pub fn effective_min_support(
    user_min: f64,
    c1: f64,
    c2: f64,
    n: usize,
    n_transactions: usize,
    scope: MiningScope,
) -> f64 {
    match scope {
        MiningScope::PositivesOnly if n_transactions > 0 => {
            user_min.max((c1 + c2) * n as f64 / n_transactions as f64)
        }
        _ => user_min,
    }
}
