//! Structure theory of a single n-potent matrix.
//!
//! Over a field containing the `(n-1)`-th roots of unity, every n-potent
//! `e` splits uniquely against the spectrum `0, omega_1, ..., omega_{n-1}`
//! into an n-partition of unity: pairwise-orthogonal idempotents summing to
//! the identity, with `e = sum_k omega_k e_k`.  The component projectors are
//! the Lagrange polynomials of the spectrum evaluated at `e`, and their
//! ranks classify `e` up to similarity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclofield::poly::CycPoly;
use crate::cyclofield::{galois_orbits, omega, omega_order, splitting_order, CycNum, Rational};
use crate::error::{Error, Result};
use crate::exactmat::{block_diag, CycMatrix};

/// An ordered n-partition of unity `(e_0, ..., e_{n-1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NPartition {
    n: u32,
    #[serde(rename = "m")]
    order: u64,
    components: Vec<CycMatrix>,
}

impl NPartition {
    pub fn new(n: u32, order: u64, components: Vec<CycMatrix>) -> Result<Self> {
        let p = NPartition { n, order, components };
        p.verify()?;
        Ok(p)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn size(&self) -> usize {
        self.components.first().map_or(0, |c| c.rows())
    }

    pub fn components(&self) -> &[CycMatrix] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &CycMatrix {
        &self.components[k]
    }

    /// Ranks of `(e_0, ..., e_{n-1})`.
    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.rank()).collect()
    }

    /// Check every partition invariant exactly: component count, shapes,
    /// idempotency, pairwise orthogonality, and sum = identity.
    pub fn verify(&self) -> Result<()> {
        if self.components.len() != self.n as usize {
            return Err(Error::InvalidPartition(format!(
                "expected {} components, got {}",
                self.n,
                self.components.len()
            )));
        }
        let size = self.size();
        for (k, c) in self.components.iter().enumerate() {
            if !c.is_square() || c.rows() != size {
                return Err(Error::InvalidPartition(format!("component {k} has wrong shape")));
            }
            if c.mul(c)? != *c {
                return Err(Error::InvalidPartition(format!("component {k} is not idempotent")));
            }
        }
        for j in 0..self.components.len() {
            for k in 0..self.components.len() {
                if j != k && !self.components[j].mul(&self.components[k])?.is_zero() {
                    return Err(Error::InvalidPartition(format!(
                        "components {j} and {k} are not orthogonal"
                    )));
                }
            }
        }
        let mut sum = CycMatrix::zeros(self.order, size, size);
        for c in &self.components {
            sum = sum.add(c)?;
        }
        if sum != CycMatrix::identity(self.order, size) {
            return Err(Error::InvalidPartition("components do not sum to the identity".into()));
        }
        Ok(())
    }
}

/// The Lagrange polynomials `p_0, ..., p_{n-1}` of the spectrum
/// `{0, omega_1, ..., omega_{n-1}}`: `p_k(omega_k) = 1`, `p_k(omega_j) = 0`
/// otherwise.  In particular `p_0 = 1 - x^{n-1}`.
pub fn lagrange_basis(n: u32) -> Result<Vec<CycPoly>> {
    assert!(n >= 2);
    let m = omega_order(n);
    let points: Vec<CycNum> = (0..n).map(|k| omega(n, k)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(n as usize);
    for k in 0..n as usize {
        let mut num = CycPoly::constant(CycNum::one(m));
        let mut den = CycNum::one(m);
        for (j, w) in points.iter().enumerate() {
            if j == k {
                continue;
            }
            num = num.mul(&CycPoly::x_minus(w))?;
            den = &den * &(&points[k] - w);
        }
        out.push(num.scale(&den.inv()?)?);
    }
    Ok(out)
}

fn ensure_npotent(e: &CycMatrix, n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::IndexOutOfRange(format!("n = {n} < 2")));
    }
    if !e.is_npotent(n)? {
        return Err(Error::NotNPotent { n });
    }
    Ok(())
}

/// Decompose an n-potent into its unique n-partition of unity over the
/// splitting field `Q(zeta_lcm(order, omega_order))`.
pub fn decompose(e: &CycMatrix, n: u32) -> Result<NPartition> {
    ensure_npotent(e, n)?;
    let order = splitting_order(n, e.order());
    let e = e.lift(order)?;
    let size = e.rows();
    let basis = lagrange_basis(n)?;
    // Evaluate all p_k(e) off a shared power cache.
    let mut powers: Vec<CycMatrix> = Vec::with_capacity(n as usize);
    powers.push(CycMatrix::identity(order, size));
    for _ in 1..n {
        powers.push(powers.last().unwrap().mul(&e)?);
    }
    let mut components = Vec::with_capacity(n as usize);
    for p in &basis {
        let mut acc = CycMatrix::zeros(order, size, size);
        for (j, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&powers[j].scale(c))?;
        }
        components.push(acc);
    }
    Ok(NPartition { n, order, components })
}

/// `sum_k omega_k e_k`; inverse of [`decompose`] on valid partitions.
pub fn recompose(p: &NPartition) -> Result<CycMatrix> {
    p.verify()?;
    let order = splitting_order(p.n, p.order);
    let size = p.size();
    let mut acc = CycMatrix::zeros(order, size, size);
    for k in 1..p.n {
        let w = omega(p.n, k)?;
        acc = acc.add(&p.component(k as usize).scale(&w))?;
    }
    Ok(acc)
}

/// Ranks of the spectral components `p_k(e)` for `k = 0..n-1`, computed over
/// the splitting field.
pub fn component_ranks(e: &CycMatrix, n: u32) -> Result<Vec<usize>> {
    Ok(decompose(e, n)?.ranks())
}

/// The complementary n-potent `diag(omega_1 (1 - e_1), ...,
/// omega_{n-1} (1 - e_{n-1}))`, of size `(n-1) * size(e)`; every spectral
/// component of `e (+) complementary(e)` has rank exactly `size(e)`.
pub fn complementary(e: &CycMatrix, n: u32) -> Result<CycMatrix> {
    let p = decompose(e, n)?;
    let id = CycMatrix::identity(p.order(), p.size());
    let mut blocks = Vec::with_capacity((n - 1) as usize);
    for k in 1..n {
        let w = omega(n, k)?;
        blocks.push(id.sub(p.component(k as usize))?.scale(&w));
    }
    block_diag(&blocks)
}

/// Split a tripotent into the unique orthogonal idempotent pair with
/// `e = e_1 - e_2`: `e_1 = (e^2 + e)/2`, `e_2 = (e^2 - e)/2`.
pub fn tripotent_split(e: &CycMatrix) -> Result<(CycMatrix, CycMatrix)> {
    ensure_npotent(e, 3)?;
    let half = Rational::new(1.into(), 2.into());
    let e2 = e.mul(e)?;
    let e1 = e2.add(e)?.scale_rational(&half);
    let e2m = e2.sub(e)?.scale_rational(&half);
    Ok((e1, e2m))
}

/// Split a quadripotent with entries in `Q(i)` into the pair
/// `(e_1, e_2 + e_3) = ((e + e^2 + e^3)/3, e^3 - e_1)`, both of which stay
/// inside `Q(i)`; the trace of the second output is always even.
pub fn quadripotent_split_q4(e: &CycMatrix) -> Result<(CycMatrix, CycMatrix)> {
    let e = e.descend(4).ok_or(Error::FieldViolation { order: 4 })?;
    ensure_npotent(&e, 4)?;
    let third = Rational::new(1.into(), 3.into());
    let sq = e.mul(&e)?;
    let cube = sq.mul(&e)?;
    let e1 = e.add(&sq)?.add(&cube)?.scale_rational(&third);
    let rest = cube.sub(&e1)?;
    let t = rest.trace_int()?;
    if (&t % 2i32) != 0i32.into() {
        return Err(Error::VerificationFailed(format!(
            "trace(e2 + e3) = {t} is odd for a quadripotent over Q(i)"
        )));
    }
    Ok((e1, rest))
}

/// Similarity of two n-potents, decided by comparing spectral component
/// ranks over the splitting field.  N-potents are diagonalizable there with
/// eigenvalue multiplicities equal to the component ranks, and similarity
/// over an extension field implies similarity over the base field, so equal
/// rank vectors are equivalent to similarity.
pub fn are_similar(e: &CycMatrix, f: &CycMatrix, n: u32) -> Result<bool> {
    if e.rows() != f.rows() || e.cols() != f.cols() {
        return Err(Error::DimensionMismatch(format!(
            "similarity needs equal shapes, got {}x{} vs {}x{}",
            e.rows(),
            e.cols(),
            f.rows(),
            f.cols()
        )));
    }
    Ok(component_ranks(e, n)? == component_ranks(f, n)?)
}

/// A random invertible integer matrix together with its exact inverse,
/// assembled from unipotent triangular factors with entries in `-2..=2`.
pub fn random_conjugator<R: Rng>(size: usize, rng: &mut R) -> (CycMatrix, CycMatrix) {
    let mut z = CycMatrix::identity(1, size);
    for t in 0..4 {
        let mut u = CycMatrix::identity(1, size);
        for i in 0..size {
            for j in 0..size {
                let fill = if t % 2 == 0 { j > i } else { j < i };
                if fill {
                    *u.entry_mut(i, j) = CycNum::from_i64(rng.gen_range(-2..=2), 1);
                }
            }
        }
        z = z.mul(&u).expect("square");
    }
    let z_inv = z.inverse().expect("unipotent product has determinant 1");
    (z, z_inv)
}

fn companion(order: u64, monic_low_coeffs: &[CycNum]) -> Result<CycMatrix> {
    let d = monic_low_coeffs.len();
    let mut c = CycMatrix::zeros(order, d, d);
    for i in 1..d {
        *c.entry_mut(i, i - 1) = CycNum::one(order);
    }
    for (i, coeff) in monic_low_coeffs.iter().enumerate() {
        *c.entry_mut(i, d - 1) = -&coeff.lift(order)?;
    }
    Ok(c)
}

/// The product `prod_{k in orbit} (x - omega_k)`, whose coefficients lie in
/// the base field; used to realize a folded orbit by companion blocks.
pub fn orbit_polynomial(n: u32, base_order: u64, orbit: &[usize]) -> Result<CycPoly> {
    let split = splitting_order(n, base_order);
    let mut p = CycPoly::constant(CycNum::one(split));
    for &k in orbit {
        let w = omega(n, k as u32)?.lift(split)?;
        p = p.mul(&CycPoly::x_minus(&w))?;
    }
    Ok(p)
}

fn orbit_polynomial_in_base(n: u32, base: u64, orbit: &[usize]) -> Result<Vec<CycNum>> {
    let p = orbit_polynomial(n, base, orbit)?;
    let d = orbit.len();
    debug_assert_eq!(p.degree(), Some(d));
    let mut low = Vec::with_capacity(d);
    for c in &p.coeffs()[..d] {
        let down = c
            .descend(base)
            .ok_or(Error::FieldViolation { order: base })?;
        low.push(down);
    }
    Ok(low)
}

/// Validate a per-component rank pattern against the Galois orbits of the
/// base field.
fn validate_ranks(n: u32, base: u64, size: usize, ranks: &[usize]) -> Result<()> {
    if ranks.len() != n as usize {
        return Err(Error::UnrealizableRanks(format!(
            "need {} component ranks, got {}",
            n,
            ranks.len()
        )));
    }
    if ranks.iter().sum::<usize>() != size {
        return Err(Error::UnrealizableRanks(format!(
            "ranks sum to {}, size is {}",
            ranks.iter().sum::<usize>(),
            size
        )));
    }
    let orbits = galois_orbits(n, base);
    for orbit in orbits.orbits() {
        let r0 = ranks[orbit[0]];
        if orbit.iter().any(|&k| ranks[k] != r0) {
            return Err(Error::UnrealizableRanks(format!(
                "ranks must be constant on the Galois orbit {orbit:?} over Q(zeta_{})",
                orbits.base_order()
            )));
        }
    }
    Ok(())
}

/// Deterministic random n-potent over `Q(zeta_order)` with the prescribed
/// spectral component ranks (`ranks[k]` = rank of `e_k`, `k = 0..n-1`).
/// Built as `z D z^{-1}` where `D` is block-diagonal from `omega_k` scalar
/// blocks and orbit companion blocks, and `z` is a random unipotent product.
pub fn random_npotent(n: u32, order: u64, size: usize, ranks: &[usize], seed: u64) -> Result<CycMatrix> {
    let base = crate::cyclofield::conductor_normalize(order);
    if size == 0 {
        return Err(Error::UnrealizableRanks("size must be positive".into()));
    }
    validate_ranks(n, base, size, ranks)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks: Vec<CycMatrix> = Vec::new();
    if ranks[0] > 0 {
        blocks.push(CycMatrix::zeros(base, ranks[0], ranks[0]));
    }
    for orbit in galois_orbits(n, base).orbits() {
        let r = ranks[orbit[0]];
        if r == 0 {
            continue;
        }
        if orbit.len() == 1 {
            let k = orbit[0] as u32;
            let w = omega(n, k)?
                .descend(base)
                .ok_or(Error::FieldViolation { order: base })?;
            blocks.push(CycMatrix::identity(base, r).scale(&w));
        } else {
            let low = orbit_polynomial_in_base(n, base, orbit)?;
            let c = companion(base, &low)?;
            for _ in 0..r {
                blocks.push(c.clone());
            }
        }
    }
    let d = if blocks.is_empty() {
        CycMatrix::zeros(base, size, size)
    } else {
        block_diag(&blocks)?.lift(base)?
    };
    debug_assert_eq!(d.rows(), size);
    let (z, z_inv) = random_conjugator(size, &mut rng);
    z.mul(&d)?.mul(&z_inv)
}

/// A uniformly random rank pattern realizable over the base field: ranks
/// constant on Galois orbits and summing to `size`.
pub fn random_rank_pattern<R: Rng>(n: u32, order: u64, size: usize, rng: &mut R) -> Vec<usize> {
    let orbits = galois_orbits(n, order);
    let mut ranks = vec![0usize; n as usize];
    let mut remaining = size;
    while remaining > 0 {
        // Candidate 0 is the kernel component (cost 1); candidate i >= 1 is
        // orbit i - 1 (cost = orbit size, one rank unit per member).
        let mut candidates = vec![0usize];
        for (i, orbit) in orbits.orbits().iter().enumerate() {
            if orbit.len() <= remaining {
                candidates.push(i + 1);
            }
        }
        let pick = candidates[rng.gen_range(0..candidates.len())];
        if pick == 0 {
            ranks[0] += 1;
            remaining -= 1;
        } else {
            let orbit = &orbits.orbits()[pick - 1];
            for &k in orbit {
                ranks[k] += 1;
            }
            remaining -= orbit.len();
        }
    }
    ranks
}
