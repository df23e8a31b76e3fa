//! Base and strong generating set via deterministic Schreier–Sims.
//!
//! Base points are appended as the smallest point moved by a strong
//! generator that fixes every earlier base point. Orbits and transversals
//! are stored in breadth-first discovery order over the level's generators.

use num_bigint::BigUint;
use num_traits::One;

use crate::perm::Perm;

#[derive(Clone, Debug)]
pub struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Perm>>,
    inverse: Vec<Option<Perm>>,
}

impl Level {
    fn new(degree: usize, base: usize, gens: Vec<Perm>) -> Self {
        let mut transversal: Vec<Option<Perm>> = vec![None; degree];
        let mut inverse: Vec<Option<Perm>> = vec![None; degree];
        transversal[base] = Some(Perm::identity(degree));
        inverse[base] = Some(Perm::identity(degree));
        let mut orbit = vec![base];
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            head += 1;
            for g in &gens {
                let q = g.image(p);
                if transversal[q].is_none() {
                    let u = transversal[p].as_ref().unwrap().then(g);
                    inverse[q] = Some(u.inverse());
                    transversal[q] = Some(u);
                    orbit.push(q);
                }
            }
        }
        Level {
            base,
            gens,
            orbit,
            transversal,
            inverse,
        }
    }

    pub fn base_point(&self) -> usize {
        self.base
    }

    /// Strong generators fixing all earlier base points.
    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    /// Fundamental orbit in discovery order.
    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    /// Element mapping the base point to `point`, if `point` is in the orbit.
    pub fn transversal(&self, point: usize) -> Option<&Perm> {
        self.transversal[point].as_ref()
    }

    fn inverse(&self, point: usize) -> Option<&Perm> {
        self.inverse[point].as_ref()
    }
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

fn fixes_all(g: &Perm, points: &[usize]) -> bool {
    points.iter().all(|&b| g.fixes(b))
}

impl StabChain {
    /// Runs Schreier–Sims on `gens`. Points in `prefix` become the first
    /// base points, in order, even if their orbits are trivial.
    pub fn build(degree: usize, gens: &[Perm], prefix: &[usize]) -> StabChain {
        let mut strong: Vec<Perm> = Vec::new();
        for g in gens {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &strong {
            if fixes_all(g, &base) {
                base.push(g.smallest_moved_point().unwrap());
            }
        }
        let level_gens = |strong: &[Perm], base: &[usize], l: usize| -> Vec<Perm> {
            strong.iter().filter(|g| fixes_all(g, &base[..l])).cloned().collect()
        };
        let mut levels: Vec<Level> = (0..base.len())
            .map(|l| Level::new(degree, base[l], level_gens(&strong, &base, l)))
            .collect();

        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut residue = None;
            'scan: for &b in &levels[li].orbit {
                let ub = levels[li].transversal(b).unwrap();
                for s in &levels[li].gens {
                    let bs = s.image(b);
                    let h = ub.then(s).then(levels[li].inverse(bs).unwrap());
                    if h.is_identity() {
                        continue;
                    }
                    let (res, j) = sift_from(&levels, h, li + 1);
                    if j < levels.len() || !res.is_identity() {
                        residue = Some((res, j));
                        break 'scan;
                    }
                }
            }
            match residue {
                None => i -= 1,
                Some((res, j)) => {
                    if j == levels.len() {
                        base.push(res.smallest_moved_point().unwrap());
                        levels.push(Level::new(degree, *base.last().unwrap(), Vec::new()));
                    }
                    strong.push(res);
                    for l in li + 1..=j {
                        levels[l] = Level::new(degree, base[l], level_gens(&strong, &base, l));
                    }
                    i = j as isize;
                }
            }
        }
        StabChain { degree, levels }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Strong generators of the whole group (those of the first level).
    pub fn strong_generators(&self) -> &[Perm] {
        self.levels.first().map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    /// Sifts `g` through every level; returns the residue and the level
    /// where sifting stopped (`levels().len()` if it went all the way).
    pub fn sift(&self, g: &Perm) -> (Perm, usize) {
        sift_from(&self.levels, g.clone(), 0)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (res, j) = self.sift(g);
        j == self.levels.len() && res.is_identity()
    }

    /// The chain of the stabilizer of the first `depth` base points.
    pub fn tail(&self, depth: usize) -> StabChain {
        StabChain {
            degree: self.degree,
            levels: self.levels[depth.min(self.levels.len())..].to_vec(),
        }
    }

    /// Canonical representative of the right coset `Hg`, where this chain
    /// belongs to `H`: the element of `Hg` whose images of the base points
    /// are lexicographically least.
    pub fn canonical_right_coset_rep(&self, g: &Perm) -> Perm {
        let mut x = g.clone();
        for level in &self.levels {
            let best = level.orbit.iter().copied().min_by_key(|&p| x.image(p)).unwrap();
            if best != level.base {
                x = level.transversal(best).unwrap().then(&x);
            }
        }
        x
    }
}

fn sift_from(levels: &[Level], mut h: Perm, from: usize) -> (Perm, usize) {
    for (l, level) in levels.iter().enumerate().skip(from) {
        let b = h.image(level.base);
        match level.inverse(b) {
            None => return (h, l),
            Some(u_inv) => {
                if b != level.base {
                    h = h.then(u_inv);
                }
            }
        }
    }
    (h, levels.len())
}
