//! Admissible parameter sets for flag-transitive symmetric designs,
//! imprimitivity clause classification and (c,d,ℓ,s) derivation.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{big, divides, divisors, is_square};
use crate::error::{Error, Result};
use crate::registry::Registry;

pub(crate) fn ser_big<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A (v, k, λ) triple of arbitrary size.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triple {
    #[serde(serialize_with = "ser_big")]
    pub v: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub k: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub lambda: BigUint,
}

impl Triple {
    pub fn new(v: impl Into<BigUint>, k: impl Into<BigUint>, lambda: impl Into<BigUint>) -> Self {
        Triple {
            v: v.into(),
            k: k.into(),
            lambda: lambda.into(),
        }
    }

    pub fn to_u64(&self) -> Option<(u64, u64, u64)> {
        Some((self.v.to_u64()?, self.k.to_u64()?, self.lambda.to_u64()?))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.v, self.k, self.lambda)
    }
}

/// Outcome of the basic arithmetic conditions, with one message per failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicCheck {
    pub failures: Vec<String>,
}

impl BasicCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `k(k-1) = λ(v-1)`, `λv < k²` and `2 < k < v-1`.
pub fn check_basic(t: &Triple) -> BasicCheck {
    let Triple { v, k, lambda } = t;
    let mut failures = Vec::new();
    let one = BigUint::one();
    let km1 = if k.is_zero() { BigUint::zero() } else { k - &one };
    let vm1 = if v.is_zero() { BigUint::zero() } else { v - &one };
    if k * &km1 != lambda * &vm1 {
        failures.push(format!("k(k-1) = {} but lambda(v-1) = {}", k * &km1, lambda * &vm1));
    }
    if lambda * v >= k * k {
        failures.push(format!("lambda*v = {} is not below k^2 = {}", lambda * v, k * k));
    }
    if !(*k > big(2) && k + &one < *v) {
        failures.push(format!("k = {k} is outside 2 < k < v-1"));
    }
    BasicCheck { failures }
}

/// A parameter set together with its factorization witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamCandidate {
    #[serde(flatten)]
    pub params: Triple,
    #[serde(serialize_with = "ser_big")]
    pub t: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub m: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub lambda1: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub lambda2: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub k1: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub k2: BigUint,
}

impl ParamCandidate {
    fn from_triple(params: Triple, t: BigUint) -> Self {
        let Triple { k, lambda, .. } = &params;
        let km1 = k - 1u32;
        let lambda1 = lambda.gcd(&km1);
        let lambda2 = lambda.gcd(k);
        let k1 = &km1 / &lambda1;
        let k2 = k / &lambda2;
        let m = lambda * &t / k;
        ParamCandidate {
            params,
            t,
            m,
            lambda1,
            lambda2,
            k1,
            k2,
        }
    }

    /// Every factorization identity, checked literally.
    pub fn witness_failures(&self) -> Vec<&'static str> {
        let Triple { v, k, lambda } = &self.params;
        let km1 = k - 1u32;
        let mut out = Vec::new();
        if &self.m * k != lambda * &self.t {
            out.push("mk = lambda t");
        }
        if !divides(&self.t, &(v - 1u32)) {
            out.push("t | v-1");
        }
        if !divides(&self.m, &km1) {
            out.push("m | k-1");
        }
        if !self.m.gcd(k).is_one() {
            out.push("gcd(m,k) = 1");
        }
        if &self.lambda1 * &self.lambda2 != *lambda {
            out.push("lambda = lambda1 lambda2");
        }
        if &self.k1 * &self.k2 != v - 1u32 {
            out.push("v-1 = k1 k2");
        }
        if !divides(&self.k2, &self.t) {
            out.push("k2 | t");
        }
        if !divides(&self.lambda1, &self.m) {
            out.push("lambda1 | m");
        }
        if self.lambda1 >= self.k2 {
            out.push("lambda1 < k2");
        }
        if !self.lambda1.gcd(&self.k2).is_one() {
            out.push("gcd(lambda1,k2) = 1");
        }
        out
    }
}

/// Runs over divisors `k₂` of `t = gcd(v-1, |M|)` and `λ₁ < k₂` coprime to
/// `k₂`, setting `k = 1 + λ₁(v-1)/k₂`, and keeps the sets with integral
/// `λ`, `k | |M|`, `λv < k²` and `2 < k < v-1`. Sorted by `k`.
pub fn enumerate_params(v: &BigUint, m_order: &BigUint) -> Result<Vec<ParamCandidate>> {
    if *v < big(4) || m_order.is_zero() {
        return Ok(Vec::new());
    }
    let vm1 = v - 1u32;
    let t = vm1.gcd(m_order);
    let mut found: Vec<Triple> = Vec::new();
    for k2 in divisors(&t)? {
        let k1 = &vm1 / &k2;
        let bound = k2
            .to_u64()
            .ok_or_else(|| Error::Factorization(format!("divisor {k2} of gcd(v-1,|M|) too large to scan")))?;
        for l1 in 1..bound {
            if l1.gcd(&bound) != 1 {
                continue;
            }
            let k = &k1 * l1 + 1u32;
            // k(k-1) = k k1 l1 is divisible by k1 k2 iff k2 | k, as gcd(l1,k2)=1
            if !(&k % &k2).is_zero() {
                continue;
            }
            let lambda = &k * (&k - 1u32) / &vm1;
            let t = Triple {
                v: v.clone(),
                k,
                lambda,
            };
            if divides(&t.k, m_order) && check_basic(&t).ok() {
                found.push(t);
            }
        }
    }
    found.sort_by(|a, b| a.k.cmp(&b.k));
    found.dedup();
    Ok(found
        .into_iter()
        .map(|p| ParamCandidate::from_triple(p, t.clone()))
        .collect())
}

/// Direct scan over `k`; the oracle for [`enumerate_params`].
pub fn brute_force_params(v: u64, m_order: &BigUint) -> Vec<Triple> {
    let mut out = Vec::new();
    if v < 4 {
        return out;
    }
    let vm1 = v as u128 - 1;
    for k in 3..v - 1 {
        let k = k as u128;
        if !(k * (k - 1)).is_multiple_of(vm1) || !(m_order % BigUint::from(k)).is_zero() {
            continue;
        }
        let lambda = k * (k - 1) / vm1;
        if lambda * v as u128 >= k * k {
            continue;
        }
        out.push(Triple::new(v, k as u64, lambda as u64));
    }
    out
}

/// A way of listing admissible parameters for given `v` and `|M|`.
pub trait ParamSearch: Send + Sync {
    fn describe(&self) -> &'static str;
    fn search(&self, v: &BigUint, m_order: &BigUint) -> Result<Vec<Triple>>;
}

struct FactorizationSearch;

impl ParamSearch for FactorizationSearch {
    fn describe(&self) -> &'static str {
        "divisor walk over gcd(v-1,|M|)"
    }

    fn search(&self, v: &BigUint, m_order: &BigUint) -> Result<Vec<Triple>> {
        Ok(enumerate_params(v, m_order)?.into_iter().map(|c| c.params).collect())
    }
}

struct BruteForceSearch;

impl ParamSearch for BruteForceSearch {
    fn describe(&self) -> &'static str {
        "scan over every k"
    }

    fn search(&self, v: &BigUint, m_order: &BigUint) -> Result<Vec<Triple>> {
        let v = v
            .to_u64()
            .ok_or_else(|| Error::Factorization(format!("v = {v} too large to scan")))?;
        Ok(brute_force_params(v, m_order))
    }
}

pub fn param_searches() -> Registry<dyn ParamSearch> {
    let mut r: Registry<dyn ParamSearch> = Registry::new();
    r.register("divisor", Box::new(FactorizationSearch))
        .register("brute-force", Box::new(BruteForceSearch));
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeTag {
    A,
    B,
    C,
    D,
    None,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeTag::A => "a",
            TypeTag::B => "b",
            TypeTag::C => "c",
            TypeTag::D => "d",
            TypeTag::None => "none",
        })
    }
}

/// (c, d, ℓ) from one of the clause shapes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseWitness {
    pub tag: TypeTag,
    #[serde(serialize_with = "ser_big")]
    pub c: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub d: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub l: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImprimitivityType {
    /// First matching clause in the order a, b, c, d.
    pub tag: TypeTag,
    /// Every matching clause.
    pub matches: Vec<TypeTag>,
    pub witnesses: Vec<ClauseWitness>,
}

fn witness(tag: TypeTag, c: BigUint, d: BigUint, l: BigUint) -> ClauseWitness {
    ClauseWitness { tag, c, d, l }
}

/// Whether `λ` satisfies the side condition of clause (c): `λ ≡ 0 mod 4`,
/// or `λ = 2u²` with `u ≥ 3` odd and `2(u²-1)` a square.
pub fn clause_c_lambda(lambda: &BigUint) -> bool {
    if lambda.is_zero() {
        return false;
    }
    if (lambda % 4u32).is_zero() {
        return true;
    }
    if lambda.is_odd() {
        return false;
    }
    let half = lambda / 2u32;
    if !is_square(&half) {
        return false;
    }
    let u = half.sqrt();
    u.is_odd() && u >= big(3) && is_square(&((&half - 1u32) * 2u32))
}

fn clause_d_lambda(lambda: &BigUint) -> bool {
    let r = lambda % 6u32;
    r == big(1) || r == big(3)
}

pub fn classify_type(t: &Triple) -> ImprimitivityType {
    let Triple { v, k, lambda: l } = t;
    let mut matches = Vec::new();
    let mut witnesses = Vec::new();

    if *l >= big(3) && k * 2u32 <= l * (l - 3u32) {
        matches.push(TypeTag::A);
    }

    let l2 = l * l;
    if *v == &l2 * (l + 2u32) && *k == l * (l + 1u32) {
        matches.push(TypeTag::B);
        witnesses.push(witness(TypeTag::B, l2.clone(), l + 2u32, l.clone()));
        witnesses.push(witness(TypeTag::B, l + 2u32, l2.clone(), big(2)));
    }

    if *l >= big(2) {
        let q = &l2 + 2u32 - l * 2u32;
        if v * 4u32 == (l + 2u32) * &q && k * 2u32 == l2 && clause_c_lambda(l) {
            matches.push(TypeTag::C);
            witnesses.push(witness(TypeTag::C, (l + 2u32) / 2u32, q / 2u32, big(2)));
        }
    }

    if *l >= big(1) {
        let q = &l2 + l * 4u32 - 1u32;
        if v * 4u32 == (l + 6u32) * &q && k * 2u32 == l * (l + 5u32) && clause_d_lambda(l) {
            matches.push(TypeTag::D);
            witnesses.push(witness(TypeTag::D, l + 6u32, q / 4u32, big(3)));
        }
    }

    ImprimitivityType {
        tag: matches.first().copied().unwrap_or(TypeTag::None),
        matches,
        witnesses,
    }
}

/// The member of a clause family with the given `λ`, when the clause's
/// side conditions allow it. Family b starts at λ = 2, d at λ = 3.
pub fn family_member(tag: TypeTag, lambda: u64) -> Option<Triple> {
    let l = big(lambda);
    let l2 = &l * &l;
    match tag {
        TypeTag::B if lambda >= 2 => Some(Triple::new(&l2 * (&l + 2u32), &l * (&l + 1u32), l)),
        TypeTag::C if clause_c_lambda(&l) => {
            let v = (&l + 2u32) * (&l2 + 2u32 - &l * 2u32) / 4u32;
            Some(Triple::new(v, &l2 / 2u32, l))
        }
        TypeTag::D if lambda >= 3 && clause_d_lambda(&l) => {
            let v = (&l + 6u32) * (&l2 + &l * 4u32 - 1u32) / 4u32;
            Some(Triple::new(v, &l * (&l + 5u32) / 2u32, l))
        }
        _ => None,
    }
}

pub fn family(tag: TypeTag, max_lambda: u64) -> Vec<Triple> {
    (1..=max_lambda).filter_map(|l| family_member(tag, l)).collect()
}

/// An integer solution of `v = cd`, `k = ℓs`, `λ(c-1) = k(ℓ-1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cdl {
    #[serde(serialize_with = "ser_big")]
    pub c: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub d: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub l: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub s: BigUint,
}

impl fmt::Display for Cdl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.c, self.d, self.l, self.s)
    }
}

/// All (c, d, ℓ, s) with c, d, ℓ, s ≥ 2 and s ≤ d, ordered by c.
pub fn derive_cdl(t: &Triple) -> Result<Vec<Cdl>> {
    let Triple { v, k, lambda } = t;
    let two = big(2);
    if k.is_zero() || v.is_zero() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for c in divisors(v)? {
        let d = v / &c;
        if c < two || d < two {
            continue;
        }
        let num = lambda * (&c - 1u32);
        if !(&num % k).is_zero() {
            continue;
        }
        let l = num / k + 1u32;
        if l < two || !divides(&l, k) {
            continue;
        }
        let s = k / &l;
        if s < two || s > d {
            continue;
        }
        out.push(Cdl { c, d, l, s });
    }
    Ok(out)
}
