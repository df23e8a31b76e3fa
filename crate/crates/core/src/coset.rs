//! Action of a group on the right cosets of a subgroup.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;

/// The permutation action of `G` on the right cosets `Hg`.
///
/// Coset `H` itself is label 0; the rest are labelled in breadth-first
/// discovery order over `G`'s generators in input order.
#[derive(Debug, Clone)]
pub struct CosetAction {
    image: PermGroup,
    reps: Vec<Perm>,
    labels: HashMap<Perm, usize>,
    subgroup: PermGroup,
}

impl CosetAction {
    pub fn new(group: &PermGroup, subgroup: &PermGroup) -> Result<Self> {
        group.check_subgroup(subgroup)?;
        let chain = subgroup.chain();
        let identity = Perm::identity(group.degree());
        let mut labels: HashMap<Perm, usize> = HashMap::new();
        labels.insert(identity.clone(), 0);
        let mut reps = vec![identity];
        let mut images: Vec<Vec<usize>> = vec![Vec::new(); group.generators().len()];
        let mut head = 0;
        while head < reps.len() {
            for (gi, g) in group.generators().iter().enumerate() {
                let rep = chain.canonical_right_coset_rep(&reps[head].then(g));
                let label = match labels.get(&rep) {
                    Some(&l) => l,
                    None => {
                        let l = reps.len();
                        labels.insert(rep.clone(), l);
                        reps.push(rep);
                        l
                    }
                };
                images[gi].push(label);
            }
            head += 1;
        }
        let gens = images.into_iter().map(Perm::from_images).collect::<Result<Vec<_>>>()?;
        let image = PermGroup::new(reps.len(), gens)?;
        Ok(CosetAction {
            image,
            reps,
            labels,
            subgroup: subgroup.clone(),
        })
    }

    /// `|G:H|`.
    pub fn degree(&self) -> usize {
        self.reps.len()
    }

    /// The image of `G`; generator `i` is the image of `G`'s generator `i`.
    pub fn image(&self) -> &PermGroup {
        &self.image
    }

    /// Canonical representative of coset `label`.
    pub fn representative(&self, label: usize) -> &Perm {
        &self.reps[label]
    }

    /// Label of the coset `Hg`.
    pub fn label_of(&self, g: &Perm) -> Option<usize> {
        let rep = self.subgroup.chain().canonical_right_coset_rep(g);
        self.labels.get(&rep).copied()
    }

    /// The permutation of coset labels induced by an element of `G`.
    pub fn act(&self, g: &Perm) -> Result<Perm> {
        if g.degree() != self.subgroup.degree() {
            return Err(Error::DegreeMismatch {
                left: self.subgroup.degree(),
                right: g.degree(),
            });
        }
        let images = self
            .reps
            .iter()
            .map(|r| self.label_of(&r.then(g)).ok_or(Error::NotInGroup))
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }

    /// Image of a subgroup `K ≤ G` in this action.
    pub fn image_of_subgroup(&self, sub: &PermGroup) -> Result<PermGroup> {
        let gens = sub
            .generators()
            .iter()
            .map(|g| self.act(g))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.degree(), gens)
    }
}

/// Orbits of `K` on the right cosets of `H` in `G`, sorted by (length, min).
pub fn induced_orbits(group: &PermGroup, h: &PermGroup, k: &PermGroup) -> Result<Vec<Vec<usize>>> {
    group.check_subgroup(k)?;
    let action = CosetAction::new(group, h)?;
    Ok(action.image_of_subgroup(k)?.orbits())
}

/// `H ∩ K` for subgroups of a common group `G`: the stabilizer in `H` of
/// the trivial coset in the action on the right cosets of `K`.
pub fn intersection(group: &PermGroup, h: &PermGroup, k: &PermGroup) -> Result<PermGroup> {
    group.check_subgroup(h)?;
    group.check_subgroup(k)?;
    let chain = k.chain();
    let start = Perm::identity(group.degree());
    let (_, stab) = h.orbit_stabilizer(start, |rep, g| chain.canonical_right_coset_rep(&rep.then(g)));
    Ok(stab)
}
