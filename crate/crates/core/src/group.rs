//! Permutation groups given by generators.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::perm::Perm;

/// A permutation group. The stabilizer chain is built on first use and is
/// immutable afterwards, so a `PermGroup` can be shared across threads.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            chain,
        }
    }
}

impl PermGroup {
    /// An empty generator list gives the trivial group.
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let gens = if gens.is_empty() {
            vec![Perm::identity(degree)]
        } else {
            gens
        };
        Ok(PermGroup {
            degree,
            gens,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).unwrap()
    }

    pub(crate) fn with_chain(degree: usize, gens: Vec<Perm>, chain: StabChain) -> Self {
        let group = PermGroup::new(degree, gens).unwrap();
        let _ = group.chain.set(chain);
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.gens, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        self.check_degree(p)?;
        Ok(self.chain().contains(p))
    }

    /// Checks that every generator of `sub` lies in `self`.
    pub fn check_subgroup(&self, sub: &PermGroup) -> Result<()> {
        if sub.degree != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: sub.degree,
            });
        }
        for (i, g) in sub.gens.iter().enumerate() {
            if !self.chain().contains(g) {
                return Err(Error::NotSubgroup { generator: i + 1 });
            }
        }
        Ok(())
    }

    fn check_degree(&self, p: &Perm) -> Result<()> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(())
    }

    fn check_point(&self, point: usize) -> Result<()> {
        if point >= self.degree {
            return Err(Error::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// The orbit of `point`, sorted ascending.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for g in &self.gens {
                let q = g.image(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
        }
        orbit.sort_unstable();
        Ok(orbit)
    }

    /// All orbits, sorted by (length, minimum element).
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if assigned[p] {
                continue;
            }
            let orbit = self.orbit(p).unwrap();
            for &q in &orbit {
                assigned[q] = true;
            }
            out.push(orbit);
        }
        out.sort_by_key(|o| (o.len(), o[0]));
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        self.check_point(point)?;
        let chain = match self.chain.get() {
            Some(c) if c.levels().first().map(|l| l.base_point()) == Some(point) => c.clone(),
            _ => StabChain::build(self.degree, &self.gens, &[point]),
        };
        let tail = chain.tail(1);
        let gens = tail.strong_generators().to_vec();
        Ok(PermGroup::with_chain(self.degree, gens, tail))
    }

    /// Orbit lengths of the stabilizer of `point`, ascending; the trivial
    /// orbit `{point}` is included, so the length of the result is the rank.
    pub fn subdegrees(&self, point: usize) -> Result<Vec<usize>> {
        self.check_point(point)?;
        if !self.is_transitive() {
            return Err(Error::NotTransitive);
        }
        let stab = self.point_stabilizer(point)?;
        let mut lengths: Vec<usize> = stab.orbits().iter().map(Vec::len).collect();
        lengths.sort_unstable();
        Ok(lengths)
    }

    /// Orbit of `seed` under an arbitrary right action together with its
    /// stabilizer (Schreier generators, pruned to a generating subset).
    pub fn orbit_stabilizer<T, F>(&self, seed: T, act: F) -> (Vec<T>, PermGroup)
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &Perm) -> T,
    {
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut orbit = vec![seed.clone()];
        let mut reps = vec![Perm::identity(self.degree)];
        index.insert(seed, 0);
        let mut head = 0;
        while head < orbit.len() {
            for g in &self.gens {
                let image = act(&orbit[head], g);
                if !index.contains_key(&image) {
                    index.insert(image.clone(), orbit.len());
                    reps.push(reps[head].then(g));
                    orbit.push(image);
                }
            }
            head += 1;
        }
        let target = self.order() / BigUint::from(orbit.len());
        let mut kept: Vec<Perm> = Vec::new();
        let mut sub = StabChain::build(self.degree, &[], &[]);
        'outer: for (i, x) in orbit.iter().enumerate() {
            if sub.order() == target {
                break;
            }
            for g in &self.gens {
                let j = index[&act(x, g)];
                let h = reps[i].then(g).then(&reps[j].inverse());
                if h.is_identity() || sub.contains(&h) {
                    continue;
                }
                kept.push(h);
                sub = StabChain::build(self.degree, &kept, &[]);
                if sub.order() == target {
                    break 'outer;
                }
            }
        }
        (orbit, PermGroup::with_chain(self.degree, kept, sub))
    }

    /// The image of a point set under the group, as sorted sets in
    /// discovery order.
    pub fn set_orbit(&self, set: &[usize]) -> Vec<Vec<usize>> {
        let mut start = set.to_vec();
        start.sort_unstable();
        let mut index: HashMap<Vec<usize>, ()> = HashMap::new();
        index.insert(start.clone(), ());
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            for g in &self.gens {
                let image = g.image_of_set(&orbit[head]);
                if index.insert(image.clone(), ()).is_none() {
                    orbit.push(image);
                }
            }
            head += 1;
        }
        orbit
    }

    /// Setwise stabilizer of a point set.
    pub fn set_stabilizer(&self, set: &[usize]) -> Result<PermGroup> {
        for &p in set {
            self.check_point(p)?;
        }
        let mut start = set.to_vec();
        start.sort_unstable();
        let (_, stab) = self.orbit_stabilizer(start, |s, g| g.image_of_set(s));
        Ok(stab)
    }

    /// Elements by closure; only for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let id = Perm::identity(self.degree);
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut out = vec![id];
        let mut head = 0;
        while head < out.len() {
            for g in &self.gens {
                let x = out[head].then(g);
                if seen.insert(x.clone(), ()).is_none() {
                    out.push(x);
                }
            }
            head += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_cycles;

    fn group(texts: &[&str], n: usize) -> PermGroup {
        PermGroup::new(n, texts.iter().map(|t| parse_cycles(t, n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(group(&["(1,2,3)"], 3).order(), BigUint::from(3u32));
        assert_eq!(PermGroup::trivial(4).order(), BigUint::from(1u32));
    }

    #[test]
    fn membership_examples() {
        let g = group(&["(1,2,3,4)", "(1,3)"], 4);
        for x in g.generators() {
            assert!(g.contains(x).unwrap());
        }
        assert!(g.contains(&Perm::identity(4)).unwrap());
        assert!(!g.contains(&parse_cycles("(1,2)", 4).unwrap()).unwrap());
        assert!(g.contains(&Perm::identity(5)).is_err());
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(PermGroup::trivial(5).orbit(2).unwrap(), vec![2]);
        assert_eq!(group(&["(1,2,3,4)"], 4).orbit(1).unwrap(), vec![0, 1, 2, 3]);
        assert!(PermGroup::trivial(5).orbit(5).is_err());
        assert_eq!(
            group(&["(2,3)", "(4,5,6)"], 6).orbits(),
            vec![vec![0], vec![1, 2], vec![3, 4, 5]]
        );
    }

    #[test]
    fn point_stabilizer_examples() {
        let s3 = group(&["(1,2)", "(1,2,3)"], 3);
        assert_eq!(s3.point_stabilizer(0).unwrap().order(), BigUint::from(2u32));
        let regular = group(&["(1,2,3,4,5)"], 5);
        assert_eq!(regular.point_stabilizer(3).unwrap().order(), BigUint::from(1u32));
    }

    #[test]
    fn subdegree_examples() {
        assert_eq!(group(&["(1,2,3,4,5)"], 5).subdegrees(0).unwrap(), vec![1; 5]);
        assert_eq!(group(&["(1,2)", "(1,2,3,4)"], 4).subdegrees(0).unwrap(), vec![1, 3]);
        assert_eq!(group(&["(1,2)"], 3).subdegrees(0), Err(Error::NotTransitive));
    }

    #[test]
    fn set_stabilizer_of_pair_in_s4() {
        let s4 = group(&["(1,2)", "(1,2,3,4)"], 4);
        let st = s4.set_stabilizer(&[0, 1]).unwrap();
        assert_eq!(st.order(), BigUint::from(4u32));
        for g in st.generators() {
            assert_eq!(g.image_of_set(&[0, 1]), vec![0, 1]);
        }
    }
}
