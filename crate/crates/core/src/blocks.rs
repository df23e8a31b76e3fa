//! Block systems (G-invariant partitions) of transitive groups.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// A partition of `{0, …, degree-1}` into `d` classes of common size `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    degree: usize,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl BlockSystem {
    /// Classes are sorted internally and ordered by their minimum element.
    pub fn new(degree: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        if classes.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("empty class".into()));
        }
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![usize::MAX; degree];
        for (i, class) in classes.iter().enumerate() {
            for &p in class {
                if p >= degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
                if class_of[p] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("point {} repeated", p + 1)));
                }
                class_of[p] = i;
            }
        }
        if let Some(p) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("point {} not covered", p + 1)));
        }
        let size = classes[0].len();
        if classes.iter().any(|c| c.len() != size) {
            return Err(Error::InvalidPartition("classes of unequal size".into()));
        }
        Ok(BlockSystem {
            degree,
            classes,
            class_of,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, point: usize) -> usize {
        self.class_of[point]
    }

    /// Class size `c`.
    pub fn class_size(&self) -> usize {
        self.classes[0].len()
    }

    /// Number of classes `d`.
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_classes() == 1 || self.class_size() == 1
    }

    /// The permutation induced by `g` on the classes, if `g` preserves the
    /// partition.
    pub fn induced(&self, g: &Perm) -> Option<Perm> {
        let mut images = Vec::with_capacity(self.num_classes());
        for class in &self.classes {
            let target = self.class_of[g.image(class[0])];
            if class.iter().any(|&p| self.class_of[g.image(p)] != target) {
                return None;
            }
            images.push(target);
        }
        Perm::from_images(images).ok()
    }

    pub fn check_invariant(&self, group: &PermGroup) -> Result<()> {
        if group.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: group.degree(),
                right: self.degree,
            });
        }
        for (i, g) in group.generators().iter().enumerate() {
            if self.induced(g).is_none() {
                return Err(Error::NotInvariant { generator: i + 1 });
            }
        }
        Ok(())
    }

    /// Action of the group on the classes.
    pub fn induced_group(&self, group: &PermGroup) -> Result<PermGroup> {
        self.check_invariant(group)?;
        let gens = group.generators().iter().map(|g| self.induced(g).unwrap()).collect();
        PermGroup::new(self.num_classes(), gens)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// The finest G-invariant partition in which `a` and `b` share a class.
pub fn minimal_block_containing(group: &PermGroup, a: usize, b: usize) -> Vec<Vec<usize>> {
    let n = group.degree();
    let mut uf = UnionFind::new(n);
    let mut queue = vec![(a, b)];
    uf.union(a, b);
    while let Some((x, y)) = queue.pop() {
        for g in group.generators() {
            let (gx, gy) = (g.image(x), g.image(y));
            if uf.union(gx, gy) {
                queue.push((gx, gy));
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        let r = uf.find(p);
        classes[r].push(p);
    }
    classes.retain(|c| !c.is_empty());
    classes
}

/// All minimal nontrivial block systems, ordered by class size and then by
/// the class containing point 0. Empty iff the group is primitive.
pub fn minimal_block_systems(group: &PermGroup) -> Result<Vec<BlockSystem>> {
    let n = group.degree();
    if n < 2 {
        return Ok(Vec::new());
    }
    if !group.is_transitive() {
        return Err(Error::NotTransitive);
    }
    let mut found: Vec<Vec<Vec<usize>>> = Vec::new();
    for b in 1..n {
        let classes = minimal_block_containing(group, 0, b);
        if classes.len() > 1 && !found.contains(&classes) {
            found.push(classes);
        }
    }
    let block_of_zero =
        |classes: &Vec<Vec<usize>>| -> Vec<usize> { classes.iter().find(|c| c.contains(&0)).unwrap().clone() };
    let blocks: Vec<Vec<usize>> = found.iter().map(block_of_zero).collect();
    let mut systems = Vec::new();
    for (i, classes) in found.iter().enumerate() {
        let mine = &blocks[i];
        let refined = blocks
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && other.len() < mine.len() && other.iter().all(|p| mine.contains(p)));
        if !refined {
            systems.push(BlockSystem::new(n, classes.clone())?);
        }
    }
    systems.sort_by(|x, y| (x.class_size(), &x.classes()[0]).cmp(&(y.class_size(), &y.classes()[0])));
    Ok(systems)
}

/// Setwise stabilizer of class `class` of an invariant block system.
pub fn class_stabilizer(group: &PermGroup, system: &BlockSystem, class: usize) -> Result<PermGroup> {
    system.check_invariant(group)?;
    if class >= system.num_classes() {
        return Err(Error::PointOutOfRange {
            point: class,
            degree: system.num_classes(),
        });
    }
    let (_, stab) = group.orbit_stabilizer(class, |&c, g| system.class_of(g.image(system.classes()[c][0])));
    Ok(stab)
}
