//! K-group invariants of n-potent matrices over a fixed base field.
//!
//! The class of an n-potent records, for each Galois orbit of the nonzero
//! spectrum points over the base field, the total rank of the corresponding
//! spectral components.  Conjugate spectrum points are indistinguishable
//! over the base field and must carry equal ranks, so each orbit coordinate
//! is divisible by the orbit size; Grothendieck differences extend the
//! values to arbitrary integers with the same divisibility.  The group is
//! therefore a direct sum of one subgroup `|O| Z <= Z` per orbit.

use std::fmt;

use crate::cyclofield::{galois_orbits, omega, GaloisOrbitSet};
use crate::error::{Error, Result};
use crate::exactmat::{block_diag, CycMatrix};
use crate::npotent::{complementary, component_ranks, decompose, orbit_polynomial};

/// A (formal-difference) class: one integer per Galois orbit of
/// `omega_1, ..., omega_{n-1}`, each divisible by its orbit size.  The
/// kernel component `e_0` carries no stable information and is excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KClass {
    n: u32,
    base_order: u64,
    orbits: GaloisOrbitSet,
    values: Vec<i64>,
}

impl KClass {
    pub fn new(n: u32, base_order: u64, values: Vec<i64>) -> Result<Self> {
        let orbits = galois_orbits(n, base_order);
        if values.len() != orbits.len() {
            return Err(Error::SignatureMismatch(format!(
                "expected {} orbit values, got {}",
                orbits.len(),
                values.len()
            )));
        }
        for (o, &v) in orbits.orbits().iter().zip(values.iter()) {
            if v.rem_euclid(o.len() as i64) != 0 {
                return Err(Error::SignatureMismatch(format!(
                    "value {v} on orbit {o:?} is not divisible by {}",
                    o.len()
                )));
            }
        }
        Ok(KClass { n, base_order: orbits.base_order(), orbits, values })
    }

    pub fn zero(n: u32, base_order: u64) -> Self {
        let orbits = galois_orbits(n, base_order);
        let values = vec![0i64; orbits.len()];
        KClass { n, base_order: orbits.base_order(), orbits, values }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn base_order(&self) -> u64 {
        self.base_order
    }

    pub fn orbits(&self) -> &GaloisOrbitSet {
        &self.orbits
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// All coordinates non-negative, i.e. the class of an actual n-potent.
    pub fn is_effective(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }

    fn check_signature(&self, other: &KClass) -> Result<()> {
        if self.n != other.n || self.base_order != other.base_order {
            return Err(Error::SignatureMismatch(format!(
                "(n, base) = ({}, {}) vs ({}, {})",
                self.n, self.base_order, other.n, other.base_order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &KClass) -> Result<KClass> {
        self.check_signature(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(KClass { values, ..self.clone() })
    }

    pub fn neg(&self) -> KClass {
        KClass { values: self.values.iter().map(|v| -v).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &KClass) -> Result<KClass> {
        self.add(&other.neg())
    }

    /// Split into effective positive and negative parts, `x = pos - neg`.
    pub fn split_parts(&self) -> (KClass, KClass) {
        let pos = KClass {
            values: self.values.iter().map(|&v| v.max(0)).collect(),
            ..self.clone()
        };
        let neg = KClass {
            values: self.values.iter().map(|&v| (-v).max(0)).collect(),
            ..self.clone()
        };
        (pos, neg)
    }
}

/// The class of an n-potent whose entries lie in the base field: fold the
/// spectral component ranks along Galois orbits.
///
/// Completeness of this invariant — that equal folded rank vectors force
/// stable similarity over the base field — follows from rational canonical
/// form: an n-potent satisfies the squarefree polynomial `x^n - x`, so its
/// rational canonical form over the base field is a direct sum of companion
/// blocks of the orbit polynomials, one family per orbit, and the block
/// multiplicities are exactly the folded ranks divided by the orbit sizes.
pub fn class_of(e: &CycMatrix, n: u32, base_order: u64) -> Result<KClass> {
    let base = crate::cyclofield::conductor_normalize(base_order);
    let e = e.descend(base).ok_or(Error::FieldViolation { order: base })?;
    let ranks = component_ranks(&e, n)?;
    let orbits = galois_orbits(n, base);
    let mut values = Vec::with_capacity(orbits.len());
    for orbit in orbits.orbits() {
        let r0 = ranks[orbit[0]];
        // Conjugation over the base field permutes the components within an
        // orbit, so the ranks agree; a mismatch would mean the descent check
        // let a foreign entry through.
        if orbit.iter().any(|&k| ranks[k] != r0) {
            return Err(Error::VerificationFailed(format!(
                "component ranks differ on Galois orbit {orbit:?}"
            )));
        }
        values.push(orbit.iter().map(|&k| ranks[k] as i64).sum());
    }
    Ok(KClass { n, base_order: base, orbits, values })
}

/// One group factor per Galois orbit: `Z` for singletons, `|O| Z` for
/// folded orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    n: u32,
    base_order: u64,
    factors: Vec<(Vec<usize>, usize)>,
}

impl GroupStructure {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn base_order(&self) -> u64 {
        self.base_order
    }

    /// `(orbit, index)` pairs; the factor is the subgroup `index * Z` of `Z`.
    pub fn factors(&self) -> &[(Vec<usize>, usize)] {
        &self.factors
    }

    pub fn indices(&self) -> Vec<usize> {
        self.factors.iter().map(|(_, i)| *i).collect()
    }

    pub fn is_free_of_rank(&self, r: usize) -> bool {
        self.factors.len() == r && self.factors.iter().all(|(_, i)| *i == 1)
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (_, idx) in &self.factors {
            if !first {
                write!(f, " (+) ")?;
            }
            first = false;
            if *idx == 1 {
                write!(f, "Z")?;
            } else {
                write!(f, "{idx}Z")?;
            }
        }
        Ok(())
    }
}

pub fn group_structure(n: u32, base_order: u64) -> GroupStructure {
    let orbits = galois_orbits(n, base_order);
    let factors = orbits
        .orbits()
        .iter()
        .map(|o| (o.clone(), o.len()))
        .collect();
    GroupStructure { n, base_order: orbits.base_order(), factors }
}

/// A deterministic block-diagonal n-potent over the base field realizing an
/// effective class: `omega_k` scalar blocks for singleton orbits, companion
/// blocks of the orbit polynomial for folded orbits.  The zero class is
/// realized by the 1x1 zero matrix.
pub fn representative(target: &KClass) -> Result<CycMatrix> {
    if !target.is_effective() {
        return Err(Error::InvalidClassTarget(format!(
            "representative needs non-negative values, got {:?}",
            target.values
        )));
    }
    let base = target.base_order;
    let n = target.n;
    let mut blocks: Vec<CycMatrix> = Vec::new();
    for (orbit, &v) in target.orbits.orbits().iter().zip(target.values.iter()) {
        if v == 0 {
            continue;
        }
        if orbit.len() == 1 {
            let k = orbit[0] as u32;
            let w = omega(n, k)?
                .descend(base)
                .ok_or(Error::FieldViolation { order: base })?;
            blocks.push(CycMatrix::identity(base, v as usize).scale(&w));
        } else {
            let p = orbit_polynomial(n, base, orbit)?;
            let d = orbit.len();
            let mut comp = CycMatrix::zeros(base, d, d);
            for i in 1..d {
                *comp.entry_mut(i, i - 1) = crate::cyclofield::CycNum::one(base);
            }
            for (i, c) in p.coeffs()[..d].iter().enumerate() {
                let down = c.descend(base).ok_or(Error::FieldViolation { order: base })?;
                *comp.entry_mut(i, d - 1) = -&down;
            }
            for _ in 0..(v as usize / d) {
                blocks.push(comp.clone());
            }
        }
    }
    if blocks.is_empty() {
        return Ok(CycMatrix::zeros(base, 1, 1));
    }
    block_diag(&blocks)
}

/// The split-case invariant: the tuple `(rank e_1, ..., rank e_{n-1})`,
/// defined when all spectrum points lie in the base field.
pub fn psi(e: &CycMatrix, n: u32, base_order: u64) -> Result<Vec<usize>> {
    let orbits = galois_orbits(n, base_order);
    if let Some(folded) = orbits.orbits().iter().find(|o| o.len() > 1) {
        return Err(Error::FoldedOrbit { k: folded[0] });
    }
    let base = orbits.base_order();
    let e = e.descend(base).ok_or(Error::FieldViolation { order: base })?;
    let ranks = component_ranks(&e, n)?;
    Ok(ranks[1..].to_vec())
}

/// Inverse of [`psi`] on classes: the block-diagonal n-potent
/// `diag(omega_1 I_{r_1}, ..., omega_{n-1} I_{r_{n-1}})`.
pub fn phi(ranks: &[usize], n: u32, base_order: u64) -> Result<CycMatrix> {
    let orbits = galois_orbits(n, base_order);
    if let Some(folded) = orbits.orbits().iter().find(|o| o.len() > 1) {
        return Err(Error::FoldedOrbit { k: folded[0] });
    }
    if ranks.len() != (n - 1) as usize {
        return Err(Error::SignatureMismatch(format!(
            "expected {} ranks, got {}",
            n - 1,
            ranks.len()
        )));
    }
    let base = orbits.base_order();
    let mut blocks = Vec::new();
    for (k, &r) in (1..n).zip(ranks.iter()) {
        if r == 0 {
            continue;
        }
        let w = omega(n, k)?
            .descend(base)
            .ok_or(Error::FieldViolation { order: base })?;
        blocks.push(CycMatrix::identity(base, r).scale(&w));
    }
    if blocks.is_empty() {
        return Ok(CycMatrix::zeros(base, 1, 1));
    }
    block_diag(&blocks)
}

/// Equality of classes; equivalent to similarity after padding both sides
/// by a common n-potent (see [`similarity_padding`]).
pub fn same_kclass(e: &CycMatrix, f: &CycMatrix, n: u32, base_order: u64) -> Result<bool> {
    Ok(class_of(e, n, base_order)? == class_of(f, n, base_order)?)
}

/// The padding certificate behind [`same_kclass`]: both matrices are padded
/// to a common size with zeros and then summed with the complementary
/// n-potent `omega` of the larger input.  The padded pair is similar if and
/// only if the classes agree.
pub fn similarity_padding(
    e: &CycMatrix,
    f: &CycMatrix,
    n: u32,
) -> Result<(CycMatrix, CycMatrix, CycMatrix)> {
    let size = e.rows().max(f.rows());
    let pad = |x: &CycMatrix| -> Result<CycMatrix> {
        if x.rows() == size {
            Ok(x.clone())
        } else {
            block_diag(&[x.clone(), CycMatrix::zeros(x.order(), size - x.rows(), size - x.rows())])
        }
    };
    let larger = if e.rows() >= f.rows() { e } else { f };
    let omega_pad = complementary(&pad(larger)?, n)?;
    let e_padded = block_diag(&[pad(e)?, omega_pad.clone()])?;
    let f_padded = block_diag(&[pad(f)?, omega_pad.clone()])?;
    Ok((e_padded, f_padded, omega_pad))
}

/// Write a formal difference in the standard form `[e] - [omega]`: shift
/// the negative part into the effective cone and realize both parts by
/// block-diagonal representatives.
pub fn standard_picture(x: &KClass) -> Result<(CycMatrix, CycMatrix)> {
    let (pos, neg) = x.split_parts();
    let e = representative(&pos)?;
    let omega_m = representative(&neg)?;
    Ok((e, omega_m))
}

/// The ranks of the spectral components of an n-potent (including the
/// kernel component `e_0`), computed over the splitting field.  Shared by
/// the decision procedures above; exposed for diagnostics.
pub fn spectral_ranks(e: &CycMatrix, n: u32) -> Result<Vec<usize>> {
    Ok(decompose(e, n)?.ranks())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclofield::CycNum;
    use crate::exactmat::{direct_sum, generator_quadripotent_q4};
    use crate::npotent::{are_similar, random_npotent, random_rank_pattern};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn class_of_examples() {
        let e = generator_quadripotent_q4();
        let c = class_of(&e, 4, 4).unwrap();
        assert_eq!(c.values(), &[1, 2]);
        assert_eq!(c.orbits().orbits(), &[vec![1], vec![2, 3]]);
        let z = CycMatrix::zeros(4, 2, 2);
        assert_eq!(class_of(&z, 4, 4).unwrap().values(), &[0, 0]);
        for k in 1..=3usize {
            let id = CycMatrix::identity(4, k);
            assert_eq!(class_of(&id, 4, 4).unwrap().values(), &[k as i64, 0]);
        }
        // entries outside the base field are rejected
        let z3 = CycMatrix::diag(3, vec![CycNum::root_of_unity(3, 1)]).unwrap();
        assert!(matches!(class_of(&z3, 4, 4), Err(Error::FieldViolation { .. })));
    }

    #[test]
    fn kclass_arithmetic() {
        let x = KClass::new(4, 4, vec![1, 2]).unwrap();
        let zero = KClass::zero(4, 4);
        assert_eq!(x.add(&zero).unwrap(), x);
        assert!(x.sub(&x).unwrap().is_zero());
        assert_eq!(x.add(&x).unwrap().values(), &[2, 4]);
        // divisibility invariant is enforced
        assert!(KClass::new(4, 4, vec![1, 1]).is_err());
        // signature mismatch
        let y = KClass::zero(4, 3);
        assert!(x.add(&y).is_err());
    }

    #[test]
    fn group_structure_table() {
        assert_eq!(group_structure(2, 4).to_string(), "Z");
        assert_eq!(group_structure(3, 4).to_string(), "Z (+) Z");
        assert_eq!(group_structure(4, 4).to_string(), "Z (+) 2Z");
        assert_eq!(group_structure(5, 4).to_string(), "Z (+) Z (+) Z (+) Z");
        assert_eq!(group_structure(4, 3).to_string(), "Z (+) Z (+) Z");
        assert!(group_structure(5, 4).is_free_of_rank(4));
        assert!(!group_structure(4, 4).is_free_of_rank(3));
        assert_eq!(group_structure(4, 4).indices(), vec![1, 2]);
    }

    #[test]
    fn representative_examples() {
        let target = KClass::new(4, 4, vec![1, 2]).unwrap();
        let r = representative(&target).unwrap();
        assert_eq!(r.rows(), 3);
        assert!(r.is_npotent(4).unwrap());
        assert_eq!(class_of(&r, 4, 4).unwrap(), target);
        assert!(same_kclass(&r, &generator_quadripotent_q4(), 4, 4).unwrap());
        // explicitly: diag(1) (+) companion(x^2 + x + 1)
        let expected = CycMatrix::from_i64(4, &[&[1, 0, 0], &[0, 0, -1], &[0, 1, -1]]);
        assert_eq!(r, expected);
        // zero class
        let z = representative(&KClass::zero(4, 4)).unwrap();
        assert_eq!(z, CycMatrix::zeros(4, 1, 1));
        // (k, 0) gives the identity
        let t = KClass::new(4, 4, vec![3, 0]).unwrap();
        assert_eq!(representative(&t).unwrap(), CycMatrix::identity(4, 3));
        // negative targets rejected
        let neg = KClass::new(4, 4, vec![-1, 0]).unwrap();
        assert!(representative(&neg).is_err());
    }

    #[test]
    fn representative_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for (n, base) in [(4u32, 4u64), (5, 1), (4, 12), (6, 4)] {
            let orbits = galois_orbits(n, base);
            for _ in 0..5 {
                let values: Vec<i64> = orbits
                    .orbits()
                    .iter()
                    .map(|o| (rand::Rng::gen_range(&mut rng, 0..3i64)) * o.len() as i64)
                    .collect();
                let target = KClass::new(n, base, values).unwrap();
                let r = representative(&target).unwrap();
                assert_eq!(class_of(&r, n, base).unwrap(), target, "n={n} base={base}");
            }
        }
    }

    #[test]
    fn psi_phi_examples() {
        // psi of the identity
        let id = CycMatrix::identity(4, 3);
        assert_eq!(psi(&id, 4, 3).unwrap(), vec![3, 0, 0]);
        // diag(omega_1, ..., omega_{n-1}) has all ranks 1
        for (n, base) in [(3u32, 1u64), (4, 3), (5, 4)] {
            let entries: Vec<CycNum> = (1..n)
                .map(|k| omega(n, k).unwrap().descend(base).unwrap())
                .collect();
            let d = CycMatrix::diag(base, entries).unwrap();
            assert_eq!(psi(&d, n, base).unwrap(), vec![1; (n - 1) as usize]);
        }
        // phi basics
        assert_eq!(phi(&[1, 0, 0], 4, 3).unwrap(), CycMatrix::identity(3, 1));
        let last = phi(&[0, 0, 1], 4, 3).unwrap();
        assert_eq!(*last.entry(0, 0), omega(4, 3).unwrap());
        // folded base errors
        assert!(matches!(psi(&id, 4, 4), Err(Error::FoldedOrbit { k: 2 })));
        assert!(matches!(phi(&[1, 1, 1], 4, 4), Err(Error::FoldedOrbit { .. })));
    }

    #[test]
    fn psi_phi_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, base) in [(3u32, 1u64), (3, 4), (4, 3), (4, 12), (5, 4)] {
            for trial in 0..5 {
                let ranks: Vec<usize> = (1..n).map(|_| rand::Rng::gen_range(&mut rng, 0..3usize)).collect();
                let m = phi(&ranks, n, base).unwrap();
                assert_eq!(psi(&m, n, base).unwrap(), ranks, "n={n} base={base} trial={trial}");
                // and psi agrees with the class values on random n-potents
                let size = 4;
                let pattern = random_rank_pattern(n, base, size, &mut rng);
                let e = random_npotent(n, base, size, &pattern, trial as u64 + 50).unwrap();
                let tuple = psi(&e, n, base).unwrap();
                let class = class_of(&e, n, base).unwrap();
                let as_i64: Vec<i64> = tuple.iter().map(|&r| r as i64).collect();
                assert_eq!(as_i64, class.values());
                // phi(psi(e)) lands in the same class
                let back = phi(&tuple, n, base).unwrap();
                assert_eq!(class_of(&back, n, base).unwrap(), class);
            }
        }
    }

    #[test]
    fn same_kclass_examples() {
        let e = generator_quadripotent_q4();
        let padded = direct_sum(&e, &CycMatrix::zeros(4, 2, 2)).unwrap();
        assert!(same_kclass(&e, &padded, 4, 4).unwrap());
        let r = representative(&KClass::new(4, 4, vec![1, 2]).unwrap()).unwrap();
        assert!(same_kclass(&e, &r, 4, 4).unwrap());
        // I_1 vs [omega_2] for n = 3
        let i1 = CycMatrix::identity(1, 1);
        let w2 = CycMatrix::from_i64(1, &[&[-1]]);
        assert!(!same_kclass(&i1, &w2, 3, 1).unwrap());
    }

    #[test]
    fn class_invariance() {
        let e = generator_quadripotent_q4();
        let c = class_of(&e, 4, 4).unwrap();
        // conjugation by random invertibles
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..3 {
            let (z, zi) = crate::npotent::random_conjugator(3, &mut rng);
            let conj = z.mul(&e).unwrap().mul(&zi).unwrap();
            assert_eq!(class_of(&conj, 4, 4).unwrap(), c);
        }
        // zero-block padding
        let padded = direct_sum(&e, &CycMatrix::zeros(4, 2, 2)).unwrap();
        assert_eq!(class_of(&padded, 4, 4).unwrap(), c);
        // swap of diagonal blocks
        let f = CycMatrix::identity(4, 2);
        let ef = direct_sum(&e, &f).unwrap();
        let fe = direct_sum(&f, &e).unwrap();
        assert_eq!(class_of(&ef, 4, 4).unwrap(), class_of(&fe, 4, 4).unwrap());
    }

    #[test]
    fn class_additivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (n, base) in [(3u32, 4u64), (4, 4)] {
            let p1 = random_rank_pattern(n, base, 3, &mut rng);
            let p2 = random_rank_pattern(n, base, 2, &mut rng);
            let e = random_npotent(n, base, 3, &p1, 21).unwrap();
            let f = random_npotent(n, base, 2, &p2, 22).unwrap();
            let sum = direct_sum(&e, &f).unwrap();
            let ce = class_of(&e, n, base).unwrap();
            let cf = class_of(&f, n, base).unwrap();
            assert_eq!(class_of(&sum, n, base).unwrap(), ce.add(&cf).unwrap());
        }
    }

    #[test]
    fn class_additive_on_orthogonal_sums() {
        // orthogonal n-potents built from the spectral pieces of a random
        // tripotent over Q(i): class_of(e + f) = class_of(e) + class_of(f)
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for trial in 0..4u64 {
            let pattern = random_rank_pattern(3, 4, 4, &mut rng);
            let g = random_npotent(3, 4, 4, &pattern, 300 + trial).unwrap();
            let p = crate::npotent::decompose(&g, 3).unwrap();
            let e = p.component(1).scale(&omega(3, 1).unwrap());
            let f = p.component(2).scale(&omega(3, 2).unwrap());
            assert!(e.mul(&f).unwrap().is_zero());
            assert!(f.mul(&e).unwrap().is_zero());
            let sum = e.add(&f).unwrap();
            assert_eq!(sum, g.lift(sum.order()).unwrap());
            let ce = class_of(&e, 3, 4).unwrap();
            let cf = class_of(&f, 3, 4).unwrap();
            assert_eq!(class_of(&sum, 3, 4).unwrap(), ce.add(&cf).unwrap(), "trial {trial}");
        }
    }

    #[test]
    fn padding_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..4u64 {
            let n = 4u32;
            let base = 4u64;
            let p1 = random_rank_pattern(n, base, 3, &mut rng);
            let p2 = random_rank_pattern(n, base, 2, &mut rng);
            let e = random_npotent(n, base, 3, &p1, 100 + trial).unwrap();
            let f = random_npotent(n, base, 2, &p2, 200 + trial).unwrap();
            let equal = same_kclass(&e, &f, n, base).unwrap();
            let (ep, fp, pad) = similarity_padding(&e, &f, n).unwrap();
            assert!(pad.is_npotent(n).unwrap());
            assert_eq!(are_similar(&ep, &fp, n).unwrap(), equal, "trial {trial}");
        }
    }

    #[test]
    fn standard_picture_examples() {
        let x = KClass::new(4, 4, vec![2, -4]).unwrap();
        let (e, om) = standard_picture(&x).unwrap();
        let ce = class_of(&e, 4, 4).unwrap();
        let co = class_of(&om, 4, 4).unwrap();
        assert_eq!(ce.sub(&co).unwrap(), x);
        // effective classes need no omega
        let y = KClass::new(4, 4, vec![1, 2]).unwrap();
        let (e, om) = standard_picture(&y).unwrap();
        assert_eq!(class_of(&e, 4, 4).unwrap(), y);
        assert!(class_of(&om, 4, 4).unwrap().is_zero());
    }
}
