//! The double complex `Γ̌(Y)` cut into column blocks.
//!
//! A block is a triple `(level t, summand c, multidegree m)`: the column
//! complex of `O(k_c)` at `m`, placed in total degrees `s + t`. A monomial
//! `c_u x^u` of `d_Y` from summand `c` to `r` maps the block `(t, c, m)` to
//! `(t - 1, r, m + u)`, facewise by `c_u (-1)^s`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;

use super::Cech;
use crate::linalg::{contraction, BlockPerturbation, CoefficientRing, Contraction, FreeChainComplex, IntMatrix};
use crate::polytope::{add, Point};
use crate::sheaf::TwistComplex;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockKey {
    pub level: i64,
    pub summand: usize,
    pub m: Point,
}

#[derive(Clone, Debug)]
struct Block {
    key: BlockKey,
    pattern: Vec<bool>,
    // face ids present in each Čech degree s = 0..=n
    faces: Vec<Vec<usize>>,
}

/// A finite set of column blocks of `Γ̌(Y)`.
#[derive(Clone, Debug)]
pub struct BlockSystem<'a> {
    cech: &'a Cech,
    y: &'a TwistComplex,
    blocks: Vec<Block>,
    index: HashMap<BlockKey, usize>,
}

impl<'a> BlockSystem<'a> {
    /// All blocks reachable from `seeds` along monomials of `d_Y`. (Every
    /// column contains the top face, so no block is empty.)
    /// The result is closed under the vertical differential, hence a
    /// subcomplex of the total complex.
    pub fn forward_closure(cech: &'a Cech, y: &'a TwistComplex, seeds: impl IntoIterator<Item = BlockKey>) -> Self {
        let mut found: BTreeSet<BlockKey> = BTreeSet::new();
        let mut stack: Vec<BlockKey> = Vec::new();
        for key in seeds {
            if found.insert(key.clone()) {
                stack.push(key);
            }
        }
        while let Some(key) = stack.pop() {
            for (next, _) in successors(y, &key) {
                if found.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        let mut system = BlockSystem {
            cech,
            y,
            blocks: Vec::new(),
            index: HashMap::new(),
        };
        system.rebuild(found.into_iter().collect());
        system
    }

    fn rebuild(&mut self, keys: Vec<BlockKey>) {
        let n = self.cech.polytope().dim();
        self.blocks = keys
            .into_iter()
            .map(|key| {
                let k = self.y.level(key.level)[key.summand];
                let pattern = self.cech.membership(k, &key.m);
                let mut faces = vec![Vec::new(); n + 1];
                for f in self.cech.lattice().faces() {
                    if pattern[f.id] {
                        faces[n - f.dim].push(f.id);
                    }
                }
                Block { key, pattern, faces }
            })
            .collect();
        self.index = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.key.clone(), i))
            .collect();
    }

    /// Keeps only blocks from which some block of `targets` is reachable.
    pub fn retain_reaching(&mut self, targets: &BTreeSet<BlockKey>) {
        // successors sit one level lower, so ascending level order suffices
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by_key(|&i| self.blocks[i].key.level);
        let mut keep = vec![false; self.blocks.len()];
        for i in order {
            let key = &self.blocks[i].key;
            keep[i] = targets.contains(key)
                || successors(self.y, key).any(|(next, _)| self.index.get(&next).is_some_and(|&j| keep[j]));
        }
        let keys = self
            .blocks
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(b, _)| b.key.clone())
            .collect();
        self.rebuild(keys);
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &BlockKey> {
        self.blocks.iter().map(|b| &b.key)
    }

    /// The column complex of each block in total degrees.
    pub fn columns(&self) -> Vec<FreeChainComplex> {
        self.blocks
            .iter()
            .map(|b| self.cech.column_from_pattern(&b.pattern).shifted(b.key.level))
            .collect()
    }

    /// One contraction per block, computed once per membership pattern.
    pub fn contractions(&self, ring: CoefficientRing) -> Result<Vec<Contraction>> {
        let mut cache: HashMap<&[bool], Contraction> = HashMap::new();
        let mut out = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            if !cache.contains_key(b.pattern.as_slice()) {
                let column = self.cech.column_from_pattern(&b.pattern);
                cache.insert(&b.pattern, contraction(&column, ring)?);
            }
            out.push(cache[b.pattern.as_slice()].shifted(b.key.level));
        }
        Ok(out)
    }

    /// The vertical differential between blocks, as block matrices indexed by
    /// source total degree.
    pub fn perturbation(&self) -> BlockPerturbation {
        let mut delta = BlockPerturbation::new();
        for (src_idx, src) in self.blocks.iter().enumerate() {
            for (next, coeff) in successors(self.y, &src.key) {
                let Some(&tgt_idx) = self.index.get(&next) else {
                    continue;
                };
                let tgt = &self.blocks[tgt_idx];
                for (s, faces) in src.faces.iter().enumerate() {
                    if faces.is_empty() {
                        continue;
                    }
                    let sign = if s % 2 == 0 { coeff.clone() } else { -coeff.clone() };
                    let mut m = IntMatrix::zeros(tgt.faces[s].len(), faces.len());
                    for (j, f) in faces.iter().enumerate() {
                        let i = tgt.faces[s]
                            .binary_search(f)
                            .expect("monomials preserve facewise membership");
                        m[(i, j)] = sign.clone();
                    }
                    delta.add(src_idx, tgt_idx, s as i64 + src.key.level, m);
                }
            }
        }
        delta
    }

    /// The total complex on these blocks: column differentials plus the
    /// vertical perturbation, as one matrix per degree.
    pub fn total_complex(&self) -> FreeChainComplex {
        let columns = self.columns();
        let live: Vec<&FreeChainComplex> = columns.iter().filter(|c| c.total_rank() > 0).collect();
        let (Some(lo), Some(hi)) = (live.iter().map(|c| c.lo()).min(), live.iter().map(|c| c.hi()).max()) else {
            return FreeChainComplex::zero();
        };
        let offsets = |d: i64| {
            let mut o = vec![0];
            for c in &columns {
                o.push(o.last().unwrap() + c.rank(d));
            }
            o
        };
        let delta = self.perturbation();
        let ranks = (lo..=hi).map(|d| *offsets(d).last().unwrap()).collect();
        let differentials = (lo + 1..=hi)
            .map(|d| {
                let (src, tgt) = (offsets(d), offsets(d - 1));
                let mut out = delta.assembled_with(&src, &tgt, d);
                for (b, c) in columns.iter().enumerate() {
                    let m = c.differential(d);
                    for i in 0..m.rows() {
                        for j in 0..m.cols() {
                            out[(tgt[b] + i, src[b] + j)] += &m[(i, j)];
                        }
                    }
                }
                out
            })
            .collect();
        FreeChainComplex::new_unchecked(lo, ranks, differentials).expect("offsets match ranks")
    }
}

/// `(t - 1, r, m + u)` with coefficient `c_u` for every term of `d_Y` leaving
/// the summand of `key`.
fn successors<'y>(y: &'y TwistComplex, key: &BlockKey) -> impl Iterator<Item = (BlockKey, BigInt)> + 'y {
    let key = key.clone();
    let column: BTreeMap<usize, Vec<(Point, BigInt)>> = y
        .differential(key.level)
        .map(|d| {
            d.iter()
                .enumerate()
                .map(|(r, row)| {
                    let terms = row[key.summand].terms().map(|(u, c)| (u.clone(), c.clone())).collect();
                    (r, terms)
                })
                .collect()
        })
        .unwrap_or_default();
    column.into_iter().flat_map(move |(r, terms)| {
        let key = key.clone();
        terms.into_iter().map(move |(u, c)| {
            (
                BlockKey {
                    level: key.level - 1,
                    summand: r,
                    m: add(&key.m, &u),
                },
                c,
            )
        })
    })
}
