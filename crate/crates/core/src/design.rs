//! Incidence structures, symmetric design verification and group actions
//! on designs.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::blocks::BlockSystem;
use crate::error::{Error, Result};
use crate::group::PermGroup;

/// Points `0..v` with a list of blocks, each a sorted point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    v: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DesignParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl DesignParams {
    pub fn new(v: u64, k: u64, lambda: u64) -> Self {
        DesignParams { v, k, lambda }
    }

    /// `2 < k < v - 1`.
    pub fn is_nontrivial(&self) -> bool {
        2 < self.k && self.k + 1 < self.v
    }

    /// `k(k-1) = λ(v-1)`.
    pub fn is_admissible(&self) -> bool {
        self.k * self.k.saturating_sub(1) == self.lambda * self.v.saturating_sub(1)
    }

    pub fn complement(&self) -> DesignParams {
        DesignParams {
            v: self.v,
            k: self.v - self.k,
            lambda: self.v + self.lambda - 2 * self.k,
        }
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.v, self.k, self.lambda)
    }
}

/// Why a structure failed a check. Indices are 1-based for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    BlockCount {
        v: usize,
        blocks: usize,
    },
    BlockSize {
        block: usize,
        size: usize,
        expected: usize,
    },
    DuplicateBlock {
        first: usize,
        second: usize,
    },
    Replication {
        point: usize,
        count: usize,
        expected: usize,
    },
    BlockPair {
        first: usize,
        second: usize,
        meet: usize,
        expected: usize,
    },
    PointPair {
        first: usize,
        second: usize,
        count: usize,
        expected: usize,
    },
    DualMismatch {
        block_lambda: usize,
        point_lambda: usize,
    },
    Uneven {
        block: usize,
        class: usize,
        meet: usize,
        expected: usize,
    },
    ClassesMet {
        block: usize,
        count: usize,
        expected: usize,
    },
    Profile(String),
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::BlockCount { v, blocks } => write!(f, "{blocks} blocks on {v} points"),
            Refutation::BlockSize { block, size, expected } => {
                write!(f, "block {} has size {size}, expected {expected}", block + 1)
            }
            Refutation::DuplicateBlock { first, second } => {
                write!(f, "blocks {} and {} coincide", first + 1, second + 1)
            }
            Refutation::Replication { point, count, expected } => {
                write!(f, "point {} lies on {count} blocks, expected {expected}", point + 1)
            }
            Refutation::BlockPair {
                first,
                second,
                meet,
                expected,
            } => write!(
                f,
                "blocks {} and {} meet in {meet} points, expected {expected}",
                first + 1,
                second + 1
            ),
            Refutation::PointPair {
                first,
                second,
                count,
                expected,
            } => write!(
                f,
                "points {} and {} lie on {count} common blocks, expected {expected}",
                first + 1,
                second + 1
            ),
            Refutation::DualMismatch {
                block_lambda,
                point_lambda,
            } => write!(
                f,
                "block pairs give lambda {block_lambda} but point pairs give {point_lambda}"
            ),
            Refutation::Uneven {
                block,
                class,
                meet,
                expected,
            } => write!(
                f,
                "block {} meets class {} in {meet} points, expected 0 or {expected}",
                block + 1,
                class + 1
            ),
            Refutation::ClassesMet { block, count, expected } => {
                write!(f, "block {} meets {count} classes, expected {expected}", block + 1)
            }
            Refutation::Profile(msg) => f.write_str(msg),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub struct ImprimitivityProfile {
    pub c: u64,
    pub d: u64,
    pub l: u64,
    pub s: u64,
}

impl fmt::Display for ImprimitivityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.c, self.d, self.l, self.s)
    }
}

/// Bitset rows for fast intersection counts.
fn bit_rows(rows: &[Vec<usize>], width: usize) -> Vec<Vec<u64>> {
    let words = width.div_ceil(64);
    rows.iter()
        .map(|r| {
            let mut bits = vec![0u64; words];
            for &x in r {
                bits[x / 64] |= 1 << (x % 64);
            }
            bits
        })
        .collect()
}

fn meet(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

impl Design {
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            b.sort_unstable();
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse {
                    token: format!("{:?}", b.iter().map(|x| x + 1).collect::<Vec<_>>()),
                    reason: "repeated point in block".into(),
                });
            }
            if let Some(&p) = b.iter().find(|&&p| p >= v) {
                return Err(Error::PointOutOfRange {
                    point: p + 1,
                    degree: v,
                });
            }
            out.push(b);
        }
        Ok(Design { v, blocks: out })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> Result<&[usize]> {
        self.blocks.get(i).map(Vec::as_slice).ok_or(Error::BlockOutOfRange {
            index: i,
            count: self.blocks.len(),
        })
    }

    /// Checks the symmetric design axioms: `v` blocks of common size `k`,
    /// every point on `k` blocks, every two blocks meeting in `λ` points and
    /// every two points on `λ` common blocks, with the same `λ` both ways.
    pub fn verify_symmetric(&self) -> std::result::Result<DesignParams, Refutation> {
        let v = self.v;
        if self.blocks.len() != v {
            return Err(Refutation::BlockCount {
                v,
                blocks: self.blocks.len(),
            });
        }
        if v == 0 {
            return Ok(DesignParams::new(0, 0, 0));
        }
        let k = self.blocks[0].len();
        if let Some((i, b)) = self.blocks.iter().enumerate().find(|(_, b)| b.len() != k) {
            return Err(Refutation::BlockSize {
                block: i,
                size: b.len(),
                expected: k,
            });
        }
        let mut point_rows: Vec<Vec<usize>> = vec![Vec::new(); v];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                point_rows[p].push(i);
            }
        }
        if let Some((p, r)) = point_rows.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(Refutation::Replication {
                point: p,
                count: r.len(),
                expected: k,
            });
        }

        let block_bits = bit_rows(&self.blocks, v);
        let mut block_lambda = None;
        for i in 0..v {
            for j in i + 1..v {
                let m = meet(&block_bits[i], &block_bits[j]);
                if m == k {
                    return Err(Refutation::DuplicateBlock { first: i, second: j });
                }
                match block_lambda {
                    None => block_lambda = Some(m),
                    Some(l) if l != m => {
                        return Err(Refutation::BlockPair {
                            first: i,
                            second: j,
                            meet: m,
                            expected: l,
                        })
                    }
                    _ => {}
                }
            }
        }

        let point_bits = bit_rows(&point_rows, v);
        let mut point_lambda = None;
        for p in 0..v {
            for q in p + 1..v {
                let m = meet(&point_bits[p], &point_bits[q]);
                match point_lambda {
                    None => point_lambda = Some(m),
                    Some(l) if l != m => {
                        return Err(Refutation::PointPair {
                            first: p,
                            second: q,
                            count: m,
                            expected: l,
                        })
                    }
                    _ => {}
                }
            }
        }
        let block_lambda = block_lambda.unwrap_or(0);
        let point_lambda = point_lambda.unwrap_or(0);
        if block_lambda != point_lambda {
            return Err(Refutation::DualMismatch {
                block_lambda,
                point_lambda,
            });
        }
        Ok(DesignParams::new(v as u64, k as u64, block_lambda as u64))
    }

    /// The design whose blocks are the complements of these blocks.
    pub fn complement(&self) -> Result<Design> {
        self.verify_symmetric()
            .map_err(|r| Error::NotSymmetric(r.to_string()))?;
        Ok(self.complement_unchecked())
    }

    fn complement_unchecked(&self) -> Design {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut inside = vec![false; self.v];
                for &p in b {
                    inside[p] = true;
                }
                (0..self.v).filter(|&p| !inside[p]).collect()
            })
            .collect();
        Design { v: self.v, blocks }
    }

    fn block_index(&self) -> HashMap<&[usize], usize> {
        self.blocks.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect()
    }

    /// For each generator of `group`, the induced permutation of block indices.
    pub fn block_action(&self, group: &PermGroup) -> Result<Vec<Vec<usize>>> {
        if group.degree() != self.v {
            return Err(Error::DegreeMismatch {
                left: group.degree(),
                right: self.v,
            });
        }
        let index = self.block_index();
        group
            .generators()
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                self.blocks
                    .iter()
                    .enumerate()
                    .map(|(bi, b)| {
                        index
                            .get(g.image_of_set(b).as_slice())
                            .copied()
                            .ok_or(Error::NotAutomorphism {
                                generator: gi + 1,
                                block: bi + 1,
                            })
                    })
                    .collect()
            })
            .collect()
    }

    /// Number of flags in the orbit of the flag (first point of block 0, block 0).
    pub fn flag_orbit_size(&self, group: &PermGroup) -> Result<usize> {
        let action = self.block_action(group)?;
        let Some(first) = self.blocks.first().and_then(|b| b.first()) else {
            return Ok(0);
        };
        let mut seen: Vec<Vec<bool>> = vec![vec![false; self.v]; self.blocks.len()];
        seen[0][*first] = true;
        let mut queue = vec![(*first, 0usize)];
        let mut count = 1;
        while let Some((p, b)) = queue.pop() {
            for (g, perm) in group.generators().iter().zip(&action) {
                let (q, c) = (g.image(p), perm[b]);
                if !seen[c][q] {
                    seen[c][q] = true;
                    count += 1;
                    queue.push((q, c));
                }
            }
        }
        Ok(count)
    }

    fn refuse_trivial(&self, force: bool) -> Result<()> {
        let k = self.blocks.first().map_or(0, Vec::len);
        if !force && !(2 < k && k + 1 < self.v) {
            return Err(Error::TrivialDesign { v: self.v, k });
        }
        Ok(())
    }

    /// Transitivity on incident point–block pairs, by explicit orbit expansion.
    pub fn is_flag_transitive(&self, group: &PermGroup, force: bool) -> Result<bool> {
        self.refuse_trivial(force)?;
        let total: usize = self.blocks.iter().map(Vec::len).sum();
        Ok(self.flag_orbit_size(group)? == total)
    }

    pub fn is_anti_flag_transitive(&self, group: &PermGroup, force: bool) -> Result<bool> {
        self.complement()?.is_flag_transitive(group, force)
    }

    /// Checks that every block meets every class in 0 or `ℓ` points for a
    /// single `ℓ`, that each block meets the same number `s` of classes, and
    /// that `v = cd`, `k = ℓs` and `λ(c-1) = k(ℓ-1)`.
    pub fn imprimitivity_profile(
        &self,
        classes: &[Vec<usize>],
    ) -> std::result::Result<ImprimitivityProfile, Refutation> {
        let params = self.verify_symmetric()?;
        let mut class_of = vec![usize::MAX; self.v];
        for (ci, class) in classes.iter().enumerate() {
            for &p in class {
                if p < self.v {
                    class_of[p] = ci;
                }
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Refutation::Profile("classes do not cover the point set".into()));
        }
        let mut l = None;
        let mut s = None;
        for (bi, b) in self.blocks.iter().enumerate() {
            let mut counts = vec![0usize; classes.len()];
            for &p in b {
                counts[class_of[p]] += 1;
            }
            let mut met = 0;
            for (ci, &m) in counts.iter().enumerate() {
                if m == 0 {
                    continue;
                }
                met += 1;
                match l {
                    None => l = Some(m),
                    Some(expected) if expected != m => {
                        return Err(Refutation::Uneven {
                            block: bi,
                            class: ci,
                            meet: m,
                            expected,
                        })
                    }
                    _ => {}
                }
            }
            match s {
                None => s = Some(met),
                Some(expected) if expected != met => {
                    return Err(Refutation::ClassesMet {
                        block: bi,
                        count: met,
                        expected,
                    })
                }
                _ => {}
            }
        }
        let (l, s) = (l.unwrap_or(0) as u64, s.unwrap_or(0) as u64);
        let c = classes.first().map_or(0, Vec::len);
        if classes.iter().any(|cl| cl.len() != c) {
            return Err(Refutation::Profile("classes have unequal sizes".into()));
        }
        let (c, d) = (c as u64, classes.len() as u64);
        let DesignParams { v, k, lambda } = params;
        if v != c * d || k != l * s || lambda * c.saturating_sub(1) != k * l.saturating_sub(1) {
            return Err(Refutation::Profile(format!(
                "(c,d,l,s)=({c},{d},{l},{s}) violates v=cd, k=ls or lambda(c-1)=k(l-1)"
            )));
        }
        if l < 2 || s < 2 {
            return Err(Refutation::Profile(format!("degenerate profile l={l}, s={s}")));
        }
        Ok(ImprimitivityProfile { c, d, l, s })
    }

    pub fn profile_for(&self, system: &BlockSystem) -> std::result::Result<ImprimitivityProfile, Refutation> {
        self.imprimitivity_profile(system.classes())
    }

    /// Sorted multiset of `|B ∩ B'|` over unordered pairs of distinct blocks,
    /// as (size, count) pairs.
    pub fn intersection_distribution(&self) -> Vec<(usize, usize)> {
        let bits = bit_rows(&self.blocks, self.v);
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for i in 0..bits.len() {
            for j in i + 1..bits.len() {
                *counts.entry(meet(&bits[i], &bits[j])).or_default() += 1;
            }
        }
        let mut out: Vec<_> = counts.into_iter().collect();
        out.sort_unstable();
        out
    }
}

/// Blocks generated by a base block under a group.
#[derive(Clone, Debug)]
pub struct BlockOrbit {
    pub design: Design,
    pub orbit_len: usize,
}

impl BlockOrbit {
    /// Whether the orbit has exactly `v` blocks.
    pub fn is_candidate_symmetric(&self) -> bool {
        self.orbit_len == self.design.v()
    }
}

/// The design `(P, B^G)`; blocks are listed in orbit discovery order with
/// the base block first.
pub fn construct_design(group: &PermGroup, base_block: &[usize]) -> Result<BlockOrbit> {
    if let Some(&p) = base_block.iter().find(|&&p| p >= group.degree()) {
        return Err(Error::PointOutOfRange {
            point: p,
            degree: group.degree(),
        });
    }
    let blocks = group.set_orbit(base_block);
    let orbit_len = blocks.len();
    Ok(BlockOrbit {
        design: Design::new(group.degree(), blocks)?,
        orbit_len,
    })
}

/// Setwise stabilizer of block `b`, which must have its whole orbit inside
/// the design's block set.
pub fn block_stabilizer(group: &PermGroup, design: &Design, b: usize) -> Result<PermGroup> {
    if group.degree() != design.v() {
        return Err(Error::DegreeMismatch {
            left: group.degree(),
            right: design.v(),
        });
    }
    let block = design.block(b)?.to_vec();
    let (orbit, stab) = group.orbit_stabilizer(block, |s, g| g.image_of_set(s));
    let index = design.block_index();
    if !orbit.iter().all(|x| index.contains_key(x.as_slice())) {
        return Err(Error::NotAutomorphism {
            generator: 0,
            block: b + 1,
        });
    }
    Ok(stab)
}
