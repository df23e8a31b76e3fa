//! Candidate search over a group catalog: admissible parameters for each
//! pair of large maximal subgroups, followed by elimination stages and a
//! base-block search.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divides, divisors_from, factor_over, factorization_value, factorize, Factorization};
use crate::blocks::minimal_block_systems;
use crate::coset::{intersection, CosetAction};
use crate::design::{block_stabilizer, construct_design, DesignParams, ImprimitivityProfile};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::params::{classify_type, derive_cdl, enumerate_params, ser_big, Cdl, ImprimitivityType, Triple};
use crate::perm::parse_cycles;
use crate::registry::Registry;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "SYMDESIGN_THREADS";

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Text(String),
    Int(u64),
}

impl Num {
    fn value(&self, what: &str) -> Result<BigUint> {
        match self {
            Num::Int(n) => Ok(BigUint::from(*n)),
            Num::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Catalog(format!("{what}: `{s}` is not a non-negative integer"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    name: String,
    order: Num,
    degree: Option<usize>,
    generators: Option<Vec<String>>,
    order_factorization: Option<Vec<(u64, u32)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaximalSpec {
    name: String,
    order: Num,
    index: Num,
    generators: Option<Vec<String>>,
    maximal_indices: Option<Vec<Num>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HintSpec {
    name: String,
    inside: String,
    index: Num,
    generators: Option<Vec<String>>,
    intersection_of: Option<Vec<String>>,
    maximal_indices: Option<Vec<Num>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntrySpec {
    group: GroupSpec,
    #[serde(default)]
    maximals: Vec<MaximalSpec>,
    #[serde(default)]
    subgroup_hints: Vec<HintSpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CatalogSpec {
    Many { groups: Vec<EntrySpec> },
    One(EntrySpec),
}

#[derive(Debug, Clone)]
pub struct MaximalRecord {
    pub name: String,
    pub order: BigUint,
    pub index: BigUint,
    pub group: Option<PermGroup>,
    pub maximal_indices: Option<Vec<BigUint>>,
}

/// A subgroup of a maximal (or of another hint), used both for index
/// eliminations and, when it has generators, as a concrete `H` or `K`.
#[derive(Debug, Clone)]
pub struct SubgroupHint {
    pub name: String,
    pub inside: String,
    pub index: BigUint,
    pub group: Option<PermGroup>,
    pub maximal_indices: Option<Vec<BigUint>>,
}

#[derive(Debug, Clone)]
pub struct GroupRecord {
    pub name: String,
    pub order: BigUint,
    pub factorization: Option<Factorization>,
    pub group: Option<PermGroup>,
    pub maximals: Vec<MaximalRecord>,
    pub hints: Vec<SubgroupHint>,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub groups: Vec<GroupRecord>,
}

fn parse_gens(degree: Option<usize>, gens: &[String], what: &str) -> Result<PermGroup> {
    let degree = degree.ok_or_else(|| Error::Catalog(format!("{what}: generators need the group degree")))?;
    let perms = gens
        .iter()
        .map(|g| parse_cycles(g, degree))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Catalog(format!("{what}: {e}")))?;
    PermGroup::new(degree, perms)
}

fn nums(list: &Option<Vec<Num>>, what: &str) -> Result<Option<Vec<BigUint>>> {
    list.as_ref()
        .map(|l| l.iter().map(|n| n.value(what)).collect())
        .transpose()
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Catalog> {
        let spec: CatalogSpec =
            serde_json::from_str(text).map_err(|e| Error::Catalog(format!("malformed catalog: {e}")))?;
        let entries = match spec {
            CatalogSpec::Many { groups } => groups,
            CatalogSpec::One(entry) => vec![entry],
        };
        let groups = entries.into_iter().map(GroupRecord::from_spec).collect::<Result<_>>()?;
        Ok(Catalog { groups })
    }
}

impl GroupRecord {
    fn from_spec(spec: EntrySpec) -> Result<GroupRecord> {
        let g = &spec.group;
        let name = g.name.clone();
        let order = g.order.value(&name)?;
        let factorization = g
            .order_factorization
            .as_ref()
            .map(|f| f.iter().map(|&(p, e)| (BigUint::from(p), e)).collect::<Factorization>());
        if let Some(f) = &factorization {
            if factorization_value(f) != order {
                return Err(Error::Catalog(format!(
                    "{name}: order factorization does not multiply to {order}"
                )));
            }
        }
        let group = g
            .generators
            .as_ref()
            .map(|gens| parse_gens(g.degree, gens, &name))
            .transpose()?;
        if let Some(grp) = &group {
            if grp.order() != order {
                return Err(Error::Catalog(format!(
                    "{name}: generators give order {}, catalog says {order}",
                    grp.order()
                )));
            }
        }

        let mut maximals = Vec::new();
        for m in &spec.maximals {
            let what = format!("{name}/{}", m.name);
            let m_order = m.order.value(&what)?;
            let index = m.index.value(&what)?;
            if &m_order * &index != order {
                return Err(Error::Catalog(format!(
                    "{what}: order {m_order} times index {index} is not {order}"
                )));
            }
            let sub = match (&m.generators, &group) {
                (Some(gens), Some(grp)) => {
                    let sub = parse_gens(g.degree, gens, &what)?;
                    grp.check_subgroup(&sub)
                        .map_err(|e| Error::Catalog(format!("{what}: {e}")))?;
                    if sub.order() != m_order {
                        return Err(Error::Catalog(format!("{what}: generators give order {}", sub.order())));
                    }
                    Some(sub)
                }
                (Some(_), None) => {
                    return Err(Error::Catalog(format!(
                        "{what}: generators given but the group has none"
                    )))
                }
                _ => None,
            };
            maximals.push(MaximalRecord {
                name: m.name.clone(),
                order: m_order,
                index,
                group: sub,
                maximal_indices: nums(&m.maximal_indices, &what)?,
            });
        }

        let mut record = GroupRecord {
            name: name.clone(),
            order,
            factorization,
            group,
            maximals,
            hints: Vec::new(),
        };
        for h in &spec.subgroup_hints {
            let what = format!("{name}/{}", h.name);
            let index = h.index.value(&what)?;
            let parent_order = record
                .subgroup_order(&h.inside)
                .ok_or_else(|| Error::Catalog(format!("{what}: unknown parent `{}`", h.inside)))?;
            if index.is_zero() || !divides(&index, &parent_order) {
                return Err(Error::Catalog(format!(
                    "{what}: index {index} does not divide {parent_order}"
                )));
            }
            let expected = &parent_order / &index;
            let sub = match (&h.generators, &h.intersection_of) {
                (Some(_), Some(_)) => {
                    return Err(Error::Catalog(format!(
                        "{what}: give generators or intersection_of, not both"
                    )))
                }
                (Some(gens), None) => Some(parse_gens(g.degree, gens, &what)?),
                (None, Some(parts)) => Some(record.intersect(parts, &what)?),
                (None, None) => None,
            };
            if let Some(s) = &sub {
                if let Some(parent) = record.subgroup(&h.inside) {
                    parent
                        .check_subgroup(s)
                        .map_err(|e| Error::Catalog(format!("{what}: {e}")))?;
                }
                if s.order() != expected {
                    return Err(Error::Catalog(format!(
                        "{what}: order {} but expected {expected}",
                        s.order()
                    )));
                }
            }
            record.hints.push(SubgroupHint {
                name: h.name.clone(),
                inside: h.inside.clone(),
                index,
                group: sub,
                maximal_indices: nums(&h.maximal_indices, &what)?,
            });
        }
        Ok(record)
    }

    fn subgroup_order(&self, name: &str) -> Option<BigUint> {
        if let Some(m) = self.maximals.iter().find(|m| m.name == name) {
            return Some(m.order.clone());
        }
        let h = self.hints.iter().find(|h| h.name == name)?;
        Some(self.subgroup_order(&h.inside)? / &h.index)
    }

    /// Generators of a named maximal or hint, when available.
    pub fn subgroup(&self, name: &str) -> Option<&PermGroup> {
        self.maximals
            .iter()
            .find(|m| m.name == name)
            .and_then(|m| m.group.as_ref())
            .or_else(|| {
                self.hints
                    .iter()
                    .find(|h| h.name == name)
                    .and_then(|h| h.group.as_ref())
            })
    }

    fn intersect(&self, parts: &[String], what: &str) -> Result<PermGroup> {
        let g = self
            .group
            .as_ref()
            .ok_or_else(|| Error::Catalog(format!("{what}: intersection needs group generators")))?;
        let mut iter = parts.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Catalog(format!("{what}: empty intersection")))?;
        let lookup = |n: &String| {
            self.subgroup(n)
                .cloned()
                .ok_or_else(|| Error::Catalog(format!("{what}: `{n}` has no generators")))
        };
        let mut acc = lookup(first)?;
        for p in iter {
            acc = intersection(g, &acc, &lookup(p)?)?;
        }
        Ok(acc)
    }

    fn primes(&self) -> Result<Vec<BigUint>> {
        let f = match &self.factorization {
            Some(f) => f.clone(),
            None => factorize(&self.order)?,
        };
        Ok(f.into_iter().map(|(p, _)| p).collect())
    }

    fn maximal_indices_of(&self, name: &str) -> Option<&[BigUint]> {
        self.maximals
            .iter()
            .find(|m| m.name == name)
            .and_then(|m| m.maximal_indices.as_deref())
            .or_else(|| {
                self.hints
                    .iter()
                    .find(|h| h.name == name)
                    .and_then(|h| h.maximal_indices.as_deref())
            })
    }

    /// Concrete subgroups of index `i` in `owner` (the owner itself for `i = 1`).
    pub fn subgroups_of_index(&self, owner: &str, i: &BigUint) -> Vec<(String, &PermGroup)> {
        let mut out = Vec::new();
        if i.is_one() {
            if let Some(g) = self.subgroup(owner) {
                out.push((owner.to_string(), g));
            }
        }
        for h in self.hints.iter().filter(|h| h.inside == owner && h.index == *i) {
            if let Some(g) = &h.group {
                out.push((h.name.clone(), g));
            }
        }
        out
    }
}

/// `|G| ≤ |M|³`.
pub fn large_filter(g_order: &BigUint, m_order: &BigUint) -> bool {
    *g_order <= m_order.pow(3)
}

/// `v = z·|G:M|` for divisors `z > 1` of `|M|`, ascending.
pub fn candidate_vs(index: &BigUint, m_factorization: &Factorization) -> Vec<BigUint> {
    divisors_from(m_factorization)
        .into_iter()
        .filter(|z| !z.is_one())
        .map(|z| z * index)
        .collect()
}

/// `k | |N|` and `|G:N| | v`.
pub fn divisibility_gate(params: &Triple, n_order: &BigUint, n_index: &BigUint) -> bool {
    divides(&params.k, n_order) && divides(n_index, &params.v)
}

/// `k | λe` for every subdegree `e > 1`; on failure returns the first bad `e`.
pub fn subdegree_gate(k: u64, lambda: u64, subdegrees: &[u64]) -> std::result::Result<(), u64> {
    match subdegrees
        .iter()
        .find(|&&e| e > 1 && !(lambda as u128 * e as u128).is_multiple_of(k as u128))
    {
        Some(&e) => Err(e),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexVerdict {
    Possible,
    Nsg,
    Unknown,
}

/// Whether `owner` can have a subgroup of index `i`, judged from the
/// catalog: a subgroup of index `i > 1` lies in a maximal subgroup whose
/// index `j` divides `i`, and then has index `i/j` there. The walk descends
/// only through hints the catalog provides.
pub fn subgroup_index_gate(record: &GroupRecord, owner: &str, i: &BigUint) -> IndexVerdict {
    if i.is_one() || record.hints.iter().any(|h| h.inside == owner && h.index == *i) {
        return IndexVerdict::Possible;
    }
    let Some(indices) = record.maximal_indices_of(owner) else {
        return IndexVerdict::Unknown;
    };
    let mut seen: Vec<&BigUint> = Vec::new();
    let mut unknown = false;
    for j in indices {
        if seen.contains(&j) || !divides(j, i) {
            continue;
        }
        seen.push(j);
        let multiplicity = indices.iter().filter(|x| *x == j).count();
        let known: Vec<&SubgroupHint> = record
            .hints
            .iter()
            .filter(|h| h.inside == owner && h.index == *j)
            .collect();
        if known.len() < multiplicity {
            return IndexVerdict::Possible;
        }
        for h in known {
            match subgroup_index_gate(record, &h.name, &(i / j)) {
                IndexVerdict::Possible => return IndexVerdict::Possible,
                IndexVerdict::Unknown => unknown = true,
                IndexVerdict::Nsg => {}
            }
        }
    }
    if unknown {
        IndexVerdict::Unknown
    } else {
        IndexVerdict::Nsg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Open,
    Nsg,
    Nsd,
    DesignFound,
    NoBlockOfLengthK,
    NotADesign,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Open => "open",
            Status::Nsg => "nsg",
            Status::Nsd => "nsd",
            Status::DesignFound => "design-found",
            Status::NoBlockOfLengthK => "no-block-of-length-k",
            Status::NotADesign => "not-a-design",
        })
    }
}

/// Label-independent data used to compare designs from different rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantVector {
    pub params: DesignParams,
    pub subdegrees: Vec<usize>,
    pub profiles: Vec<ImprimitivityProfile>,
    /// (|B ∩ B'|, number of block pairs)
    pub intersections: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DesignCertificate {
    pub h: String,
    pub k_group: String,
    /// 1-based points of the base block in the coset action.
    pub base_block: Vec<usize>,
    pub blocks: usize,
    pub flag_transitive: bool,
    pub anti_flag_transitive: bool,
    pub block_systems: Vec<(usize, usize)>,
    #[serde(serialize_with = "ser_big")]
    pub block_stabilizer_order: BigUint,
    pub invariants: InvariantVector,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateTuple {
    pub group: String,
    pub m_name: String,
    pub n_name: String,
    pub nr_m: usize,
    pub nr_n: usize,
    #[serde(serialize_with = "ser_big")]
    pub i_h: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub i_k: BigUint,
    pub params: Triple,
    pub profile: Vec<Cdl>,
    #[serde(rename = "type")]
    pub imprimitivity: ImprimitivityType,
    pub status: Status,
    pub subdegrees: Option<Vec<usize>>,
    pub k_orbit_lengths: Option<Vec<usize>>,
    pub designs: Vec<DesignCertificate>,
    pub notes: Vec<String>,
}

/// Per-tuple cache shared between stages.
#[derive(Default)]
pub struct Scratch {
    actions: HashMap<String, CosetAction>,
}

impl Scratch {
    fn action(&mut self, g: &PermGroup, name: &str, h: &PermGroup) -> Result<&CosetAction> {
        if !self.actions.contains_key(name) {
            self.actions.insert(name.to_string(), CosetAction::new(g, h)?);
        }
        Ok(&self.actions[name])
    }
}

/// One elimination or construction step applied to open tuples.
pub trait Stage: Send + Sync {
    fn describe(&self) -> &'static str;
    fn apply(&self, record: &GroupRecord, tuple: &mut CandidateTuple, scratch: &mut Scratch) -> Result<()>;
}

struct SubgroupIndexStage;

impl Stage for SubgroupIndexStage {
    fn describe(&self) -> &'static str {
        "M needs a subgroup of index i_H and N one of index i_K"
    }

    fn apply(&self, record: &GroupRecord, tuple: &mut CandidateTuple, _: &mut Scratch) -> Result<()> {
        for (side, owner, i) in [("M", &tuple.m_name, &tuple.i_h), ("N", &tuple.n_name, &tuple.i_k)] {
            match subgroup_index_gate(record, owner, i) {
                IndexVerdict::Nsg => {
                    let note = format!("{side} = {owner} has no subgroup of index {i}");
                    tuple.notes.push(note);
                    tuple.status = Status::Nsg;
                    return Ok(());
                }
                IndexVerdict::Unknown => {
                    let note = format!("subgroups of index {i} in {owner}: unknown");
                    tuple.notes.push(note);
                }
                IndexVerdict::Possible => {}
            }
        }
        Ok(())
    }
}

struct SubdegreeStage;

impl Stage for SubdegreeStage {
    fn describe(&self) -> &'static str {
        "k divides lambda*e for every nontrivial subdegree e"
    }

    fn apply(&self, record: &GroupRecord, tuple: &mut CandidateTuple, scratch: &mut Scratch) -> Result<()> {
        let Some(g) = &record.group else {
            tuple.notes.push("subdegrees unavailable: no group generators".into());
            return Ok(());
        };
        let hs = record.subgroups_of_index(&tuple.m_name, &tuple.i_h);
        if hs.is_empty() {
            tuple.notes.push(format!(
                "subdegrees unavailable: no generators for H in {}",
                tuple.m_name
            ));
            return Ok(());
        }
        let (Some(k), Some(lambda)) = (tuple.params.k.to_u64(), tuple.params.lambda.to_u64()) else {
            return Ok(());
        };
        let mut failures = Vec::new();
        for (name, h) in &hs {
            let action = scratch.action(g, name, h)?;
            let subdegrees = action.image().subdegrees(0)?;
            let as_u64: Vec<u64> = subdegrees.iter().map(|&e| e as u64).collect();
            tuple.subdegrees.get_or_insert(subdegrees);
            match subdegree_gate(k, lambda, &as_u64) {
                Ok(()) => return Ok(()),
                Err(e) => failures.push(format!("H = {name}: k = {k} does not divide lambda*e at e = {e}")),
            }
        }
        tuple.notes.extend(failures);
        tuple.status = Status::Nsd;
        Ok(())
    }
}

struct BaseBlockStage;

impl BaseBlockStage {
    fn certify(
        g: &PermGroup,
        action: &CosetAction,
        base_block: &[usize],
        names: (&str, &str),
    ) -> Result<Option<DesignCertificate>> {
        let image = action.image();
        let orbit = construct_design(image, base_block)?;
        if !orbit.is_candidate_symmetric() {
            return Ok(None);
        }
        let design = orbit.design;
        let Ok(params) = design.verify_symmetric() else {
            return Ok(None);
        };
        let nontrivial = params.is_nontrivial();
        let flag_transitive = nontrivial && design.is_flag_transitive(image, false)?;
        let anti_flag_transitive = nontrivial && design.is_anti_flag_transitive(image, false)?;
        let systems = minimal_block_systems(image)?;
        let mut profiles = Vec::new();
        for s in &systems {
            if let Ok(p) = design.profile_for(s) {
                profiles.push(p);
            }
        }
        profiles.sort();
        let stab = block_stabilizer(image, &design, 0)?;
        let invariants = InvariantVector {
            params,
            subdegrees: image.subdegrees(0)?,
            profiles,
            intersections: design.intersection_distribution(),
        };
        debug_assert_eq!(g.order(), image.order());
        Ok(Some(DesignCertificate {
            h: names.0.to_string(),
            k_group: names.1.to_string(),
            base_block: base_block.iter().map(|p| p + 1).collect(),
            blocks: design.blocks().len(),
            flag_transitive,
            anti_flag_transitive,
            block_systems: systems.iter().map(|s| (s.num_classes(), s.class_size())).collect(),
            block_stabilizer_order: stab.order(),
            invariants,
        }))
    }
}

impl Stage for BaseBlockStage {
    fn describe(&self) -> &'static str {
        "a K-orbit of length k in the action on the cosets of H must be a base block"
    }

    fn apply(&self, record: &GroupRecord, tuple: &mut CandidateTuple, scratch: &mut Scratch) -> Result<()> {
        let Some(g) = &record.group else {
            tuple
                .notes
                .push("base-block search unavailable: no group generators".into());
            return Ok(());
        };
        let hs = record.subgroups_of_index(&tuple.m_name, &tuple.i_h);
        let ks = record.subgroups_of_index(&tuple.n_name, &tuple.i_k);
        if hs.is_empty() || ks.is_empty() {
            tuple
                .notes
                .push("base-block search unavailable: H or K has no generators".into());
            return Ok(());
        }
        let Some(k) = tuple.params.k.to_usize() else {
            return Ok(());
        };
        let mut saw_orbit = false;
        for (h_name, h) in &hs {
            let action = scratch.action(g, h_name, h)?;
            for (k_name, k_group) in &ks {
                let orbits = action.image_of_subgroup(k_group)?.orbits();
                let lengths: Vec<usize> = orbits.iter().map(Vec::len).collect();
                tuple.k_orbit_lengths.get_or_insert(lengths);
                for orbit in orbits.iter().filter(|o| o.len() == k) {
                    saw_orbit = true;
                    if let Some(cert) = Self::certify(g, action, orbit, (h_name, k_name))? {
                        tuple.designs.push(cert);
                    }
                }
            }
        }
        tuple.status = if !tuple.designs.is_empty() {
            Status::DesignFound
        } else if saw_orbit {
            Status::NotADesign
        } else {
            Status::NoBlockOfLengthK
        };
        Ok(())
    }
}

pub fn stages() -> Registry<dyn Stage> {
    let mut r: Registry<dyn Stage> = Registry::new();
    r.register("subgroup-index", Box::new(SubgroupIndexStage))
        .register("subdegree", Box::new(SubdegreeStage))
        .register("base-block", Box::new(BaseBlockStage));
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub name: String,
    #[serde(serialize_with = "ser_big")]
    pub order: BigUint,
    pub tuples: Vec<CandidateTuple>,
    /// Design-found rows (positions in `tuples`) grouped by equal invariant vectors.
    pub design_classes: Vec<Vec<usize>>,
}

impl GroupReport {
    pub fn survivors(&self) -> impl Iterator<Item = &CandidateTuple> {
        self.tuples
            .iter()
            .filter(|t| !matches!(t.status, Status::Nsg | Status::Nsd))
    }

    pub fn count(&self, status: Status) -> usize {
        self.tuples.iter().filter(|t| t.status == status).count()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub stages: Vec<String>,
    pub groups: Vec<GroupReport>,
}

/// Candidate tuples after the arithmetic steps, before any stage runs.
pub fn candidate_tuples(record: &GroupRecord) -> Result<Vec<CandidateTuple>> {
    let primes = record.primes()?;
    let large: Vec<(usize, &MaximalRecord)> = record
        .maximals
        .iter()
        .enumerate()
        .filter(|(_, m)| large_filter(&record.order, &m.order))
        .map(|(i, m)| (i + 1, m))
        .collect();
    let mut out = Vec::new();
    for &(nr_m, m) in &large {
        let f = factor_over(&m.order, &primes)
            .ok_or_else(|| Error::Catalog(format!("{}/{}: order has primes outside |G|", record.name, m.name)))?;
        for v in candidate_vs(&m.index, &f) {
            let i_h = &v / &m.index;
            for cand in enumerate_params(&v, &m.order)? {
                let params = cand.params;
                for &(nr_n, n) in &large {
                    if !divisibility_gate(&params, &n.order, &n.index) {
                        continue;
                    }
                    out.push(CandidateTuple {
                        group: record.name.clone(),
                        m_name: m.name.clone(),
                        n_name: n.name.clone(),
                        nr_m,
                        nr_n,
                        i_h: i_h.clone(),
                        i_k: &params.v / &n.index,
                        profile: derive_cdl(&params)?,
                        imprimitivity: classify_type(&params),
                        params: params.clone(),
                        status: Status::Open,
                        subdegrees: None,
                        k_orbit_lengths: None,
                        designs: Vec::new(),
                        notes: Vec::new(),
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| (a.nr_m, a.nr_n, &a.params.k).cmp(&(b.nr_m, b.nr_n, &b.params.k)));
    Ok(out)
}

fn evaluate(record: &GroupRecord, mut tuple: CandidateTuple, chosen: &[&dyn Stage]) -> Result<CandidateTuple> {
    let mut scratch = Scratch::default();
    for stage in chosen {
        if tuple.status != Status::Open {
            break;
        }
        stage.apply(record, &mut tuple, &mut scratch)?;
    }
    Ok(tuple)
}

fn design_classes(tuples: &[CandidateTuple]) -> Vec<Vec<usize>> {
    let mut classes: Vec<(InvariantVector, Vec<usize>)> = Vec::new();
    for (i, t) in tuples.iter().enumerate() {
        for d in &t.designs {
            match classes.iter_mut().find(|(inv, _)| *inv == d.invariants) {
                Some((_, rows)) => {
                    if !rows.contains(&i) {
                        rows.push(i)
                    }
                }
                None => classes.push((d.invariants.clone(), vec![i])),
            }
        }
    }
    classes.into_iter().map(|(_, rows)| rows).collect()
}

/// Runs the named stages, in order, on every tuple of every group. Tuples
/// are evaluated in parallel; the report is assembled in canonical order.
pub fn run(catalog: &Catalog, stage_names: &[&str]) -> Result<PipelineReport> {
    let registry = stages();
    let chosen = stage_names
        .iter()
        .map(|n| registry.get(n))
        .collect::<Result<Vec<_>>>()?;
    let work = || -> Result<Vec<GroupReport>> {
        let mut groups: Vec<&GroupRecord> = catalog.groups.iter().collect();
        groups.sort_by(|a, b| a.name.cmp(&b.name));
        groups
            .into_iter()
            .map(|record| {
                if let Some(g) = &record.group {
                    g.order();
                }
                let tuples = candidate_tuples(record)?
                    .into_par_iter()
                    .map(|t| evaluate(record, t, &chosen))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupReport {
                    name: record.name.clone(),
                    order: record.order.clone(),
                    design_classes: design_classes(&tuples),
                    tuples,
                })
            })
            .collect()
    };
    let threads = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok());
    let groups = match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Catalog(format!("thread pool: {e}")))?
            .install(work)?,
        _ => work()?,
    };
    Ok(PipelineReport {
        stages: stage_names.iter().map(|s| s.to_string()).collect(),
        groups,
    })
}

pub fn default_stages() -> Vec<&'static str> {
    stages().names()
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Table-shaped text report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            let _ = writeln!(out, "group {} (order {})", g.name, g.order);
            let _ = writeln!(
                out,
                "{:>5} {:<10} {:>5} {:<10} {:>12} {:>20} {:<20} {:<5} status",
                "nr(M)", "M", "nr(N)", "N", "(i_H,i_K)", "(v,k,lambda)", "(c,d,l)", "type"
            );
            for t in &g.tuples {
                let cdl: Vec<String> = t.profile.iter().map(|x| format!("({},{},{})", x.c, x.d, x.l)).collect();
                let cdl = if cdl.is_empty() { "-".to_string() } else { cdl.join(" ") };
                let _ = writeln!(
                    out,
                    "{:>5} {:<10} {:>5} {:<10} {:>12} {:>20} {:<20} {:<5} {}",
                    t.nr_m,
                    t.m_name,
                    t.nr_n,
                    t.n_name,
                    format!("({},{})", t.i_h, t.i_k),
                    t.params.to_string(),
                    cdl,
                    t.imprimitivity.tag,
                    t.status
                );
                if let Some(l) = &t.k_orbit_lengths {
                    let _ = writeln!(out, "      K-orbit lengths: {}", join(l));
                }
                for d in &t.designs {
                    let _ = writeln!(
                        out,
                        "      design {} from H={} K={}: {} blocks, flag-transitive: {}, anti-flag-transitive: {}, profiles: {}",
                        d.invariants.params,
                        d.h,
                        d.k_group,
                        d.blocks,
                        yes_no(d.flag_transitive),
                        yes_no(d.anti_flag_transitive),
                        join(&d.invariants.profiles)
                    );
                }
                for n in &t.notes {
                    let _ = writeln!(out, "      note: {n}");
                }
            }
            let survivors = g.survivors().count();
            let _ = writeln!(
                out,
                "tuples: {}; eliminated: {} nsg, {} nsd; remaining: {} ({} design-found, {} no-block-of-length-k, {} not-a-design, {} open)",
                g.tuples.len(),
                g.count(Status::Nsg),
                g.count(Status::Nsd),
                survivors,
                g.count(Status::DesignFound),
                g.count(Status::NoBlockOfLengthK),
                g.count(Status::NotADesign),
                g.count(Status::Open)
            );
            match g.design_classes.len() {
                0 => {}
                1 => {
                    let _ = writeln!(
                        out,
                        "designs from {} rows are indistinguishable by invariants",
                        g.design_classes[0].len()
                    );
                }
                n => {
                    let _ = writeln!(out, "designs fall into {n} invariant classes");
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    #[test]
    fn large_filter_examples() {
        assert!(large_filter(&big(95040), &big(7920)));
        assert!(!large_filter(&big(95040), &big(12)));
        assert!(large_filter(&big(95040), &big(46)));
        assert!(!large_filter(&big(95040), &big(45)));
    }

    #[test]
    fn candidate_vs_skip_z_one() {
        let f = factorize(&big(7920)).unwrap();
        let vs = candidate_vs(&big(12), &f);
        assert!(vs.contains(&big(144)));
        assert!(!vs.contains(&big(12)));
        let f = factorize(&big(7)).unwrap();
        assert_eq!(candidate_vs(&big(5), &f), vec![big(35)]);
    }

    #[test]
    fn divisibility_examples() {
        let p = Triple::new(144u32, 66u32, 30u32);
        assert!(divisibility_gate(&p, &big(7920), &big(12)));
        assert!(divisibility_gate(&p, &big(660), &big(144)));
        assert!(!divisibility_gate(&p, &big(100), &big(12)));
    }

    #[test]
    fn subdegree_examples() {
        assert_eq!(subdegree_gate(66, 30, &[1, 11, 11, 55, 66]), Ok(()));
        assert_eq!(
            subdegree_gate(420, 20, &[7, 42, 126, 210, 252, 630, 1260, 2520]),
            Err(7)
        );
        assert_eq!(subdegree_gate(10, 3, &[1, 10]), Ok(()));
    }

    fn stub(maximal_indices: &str, hints: &str) -> GroupRecord {
        let text = format!(
            r#"{{"group": {{"name": "X", "order": "120"}},
                "maximals": [{{"name": "M", "order": 60, "index": 2, "maximal_indices": {maximal_indices}}}],
                "subgroup_hints": {hints}}}"#
        );
        Catalog::from_json(&text).unwrap().groups.remove(0)
    }

    #[test]
    fn index_gate_cases() {
        let r = stub("[5, 6, 10]", "[]");
        assert_eq!(subgroup_index_gate(&r, "M", &big(1)), IndexVerdict::Possible);
        assert_eq!(subgroup_index_gate(&r, "M", &big(7)), IndexVerdict::Nsg);
        assert_eq!(subgroup_index_gate(&r, "M", &big(12)), IndexVerdict::Possible);
        let r = stub("null", "[]");
        assert_eq!(subgroup_index_gate(&r, "M", &big(12)), IndexVerdict::Unknown);
        // descend into the only index-5 maximal, which has no index-3 subgroup
        let r = stub(
            "[5, 6, 10]",
            r#"[{"name": "A4", "inside": "M", "index": 5, "maximal_indices": [4, 3]}]"#,
        );
        assert_eq!(subgroup_index_gate(&r, "M", &big(15)), IndexVerdict::Possible);
        assert_eq!(subgroup_index_gate(&r, "M", &big(10)), IndexVerdict::Possible);
        let r = stub(
            "[5, 6]",
            r#"[{"name": "A4", "inside": "M", "index": 5, "maximal_indices": [4]}]"#,
        );
        assert_eq!(subgroup_index_gate(&r, "M", &big(15)), IndexVerdict::Nsg);
    }

    #[test]
    fn catalog_validation() {
        let bad = r#"{"group": {"name": "X", "order": "120"}, "maximals": [{"name": "M", "order": 50, "index": 2}]}"#;
        assert!(matches!(Catalog::from_json(bad), Err(Error::Catalog(_))));
        assert!(Catalog::from_json("{").is_err());
        let many = r#"{"groups": []}"#;
        assert!(Catalog::from_json(many).unwrap().groups.is_empty());
    }

    #[test]
    fn empty_catalog_gives_empty_report() {
        let report = run(&Catalog::default(), &default_stages()).unwrap();
        assert!(report.groups.is_empty());
        assert_eq!(report.to_text(), "");
    }

    #[test]
    fn unknown_stage_is_rejected() {
        assert!(matches!(
            run(&Catalog::default(), &["nope"]),
            Err(Error::UnknownStrategy(_))
        ));
    }
}
