//! Permutations on `{0, …, n-1}`.
//!
//! Composition follows the right-action convention: `p.compose(q)` applies
//! `p` first and then `q`, so `i ↦ q(p(i))`. Cycle notation at the text
//! boundary is 1-based, e.g. `(1,2,3)(5,6)`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            if x >= degree || seen[x] {
                return Err(Error::NotBijection { degree });
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds a permutation from 1-based images, as in `[2, 3, 1, 4]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        let zero: Vec<usize> = images
            .iter()
            .map(|&x| {
                if x == 0 || x > degree {
                    Err(Error::PointOutOfRange { point: x, degree })
                } else {
                    Ok(x - 1)
                }
            })
            .collect::<Result<_>>()?;
        Perm::from_images(zero)
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a >= degree {
                    return Err(Error::PointOutOfRange { point: a + 1, degree });
                }
                if used[a] {
                    return Err(Error::Parse {
                        token: (a + 1).to_string(),
                        reason: "point repeated".into(),
                    });
                }
                used[a] = true;
                images[a] = cycle[(i + 1) % cycle.len()] as u32;
            }
        }
        Ok(Perm { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// 1-based image list.
    pub fn one_based_images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    /// `i ↦ q(p(i))`.
    pub fn compose(&self, q: &Perm) -> Result<Perm> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        Ok(self.then(q))
    }

    /// Unchecked composition; degrees must agree.
    #[inline]
    pub(crate) fn then(&self, q: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), q.degree());
        Perm {
            images: self.images.iter().map(|&x| q.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i)
    }

    pub fn fixes(&self, point: usize) -> bool {
        self.images[point] as usize == point
    }

    /// Nontrivial cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Element order: lcm of cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles()
            .iter()
            .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }

    /// Image of a point set, returned sorted.
    pub fn image_of_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&x| self.image(x)).collect();
        out.sort_unstable();
        out
    }
}

/// Parses 1-based disjoint-cycle notation such as `(1,2,3)(4,5)`.
///
/// Commas or whitespace separate points; `""` and `"()"` denote the
/// identity.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut number = String::new();
    let mut after_point = false;

    let flush = |number: &mut String, current: &mut Option<Vec<usize>>| -> Result<()> {
        if number.is_empty() {
            return Ok(());
        }
        let token = std::mem::take(number);
        let cycle = current.as_mut().ok_or_else(|| Error::Parse {
            token: token.clone(),
            reason: "point outside parentheses".into(),
        })?;
        let value: usize = token.parse().map_err(|_| Error::Parse {
            token: token.clone(),
            reason: "not an integer".into(),
        })?;
        if value == 0 || value > degree {
            return Err(Error::Parse {
                token,
                reason: format!("point out of range 1..={degree}"),
            });
        }
        cycle.push(value - 1);
        Ok(())
    };

    for ch in text.chars() {
        match ch {
            '(' => {
                if current.is_some() {
                    return Err(Error::Parse {
                        token: "(".into(),
                        reason: "nested parenthesis".into(),
                    });
                }
                current = Some(Vec::new());
                after_point = false;
            }
            ')' => {
                flush(&mut number, &mut current)?;
                let cycle = current.take().ok_or_else(|| Error::Parse {
                    token: ")".into(),
                    reason: "unmatched parenthesis".into(),
                })?;
                if cycle.len() > 1 {
                    cycles.push(cycle);
                }
                after_point = false;
            }
            ',' => {
                if !after_point {
                    return Err(Error::Parse {
                        token: ",".into(),
                        reason: "empty entry".into(),
                    });
                }
                flush(&mut number, &mut current)?;
                after_point = false;
            }
            c if c.is_whitespace() => flush(&mut number, &mut current)?,
            c if c.is_ascii_digit() => {
                number.push(c);
                after_point = true;
            }
            c => {
                return Err(Error::Parse {
                    token: c.to_string(),
                    reason: "unexpected character".into(),
                })
            }
        }
    }
    if current.is_some() {
        return Err(Error::Parse {
            token: "(".into(),
            reason: "unclosed parenthesis".into(),
        });
    }
    if !number.is_empty() {
        return Err(Error::Parse {
            token: number,
            reason: "point outside parentheses".into(),
        });
    }
    Perm::from_cycles(degree, &cycles)
}

impl fmt::Display for Perm {
    /// 1-based cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}; {}]", self.degree(), self)
    }
}
