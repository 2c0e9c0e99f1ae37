//! Equivalence certificates for n-potents, machine-verified at
//! construction.
//!
//! Algebraic equivalence is witnessed by a pair `(a, b)` with `ab = e` and
//! `ba = f`; similarity by an invertible `z` with `z e z^{-1} = f`.  Every
//! constructor here checks its output identities exactly before returning —
//! a certificate that does not verify is a hard error, never a value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{from_blocks_2x2, CycMatrix};

/// `(a, b)` with `ab = e`, `ba = f`.  Normalized witnesses additionally
/// satisfy `a = e^{n-1} a = a f^{n-1}` and `b = f^{n-1} b = b e^{n-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivWitness {
    n: u32,
    e: CycMatrix,
    f: CycMatrix,
    a: CycMatrix,
    b: CycMatrix,
}

impl EquivWitness {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn e(&self) -> &CycMatrix {
        &self.e
    }

    pub fn f(&self) -> &CycMatrix {
        &self.f
    }

    pub fn a(&self) -> &CycMatrix {
        &self.a
    }

    pub fn b(&self) -> &CycMatrix {
        &self.b
    }

    /// Check `e^n = e`, `f^n = f`, `ab = e`, `ba = f`; the error names the
    /// first failing identity.
    pub fn verify(&self) -> Result<()> {
        if !self.e.is_npotent(self.n)? {
            return Err(Error::VerificationFailed(format!("e^{} = e", self.n)));
        }
        if !self.f.is_npotent(self.n)? {
            return Err(Error::VerificationFailed(format!("f^{} = f", self.n)));
        }
        if self.a.mul(&self.b)? != self.e {
            return Err(Error::VerificationFailed("a*b = e".into()));
        }
        if self.b.mul(&self.a)? != self.f {
            return Err(Error::VerificationFailed("b*a = f".into()));
        }
        Ok(())
    }

    /// The four normalization identities of a nice witness pair.
    pub fn verify_normalized(&self) -> Result<()> {
        self.verify()?;
        let nm1 = (self.n - 1) as u64;
        let ep = self.e.pow(nm1)?;
        let fp = self.f.pow(nm1)?;
        if ep.mul(&self.a)? != self.a {
            return Err(Error::VerificationFailed("a = e^{n-1}*a".into()));
        }
        if self.a.mul(&fp)? != self.a {
            return Err(Error::VerificationFailed("a = a*f^{n-1}".into()));
        }
        if fp.mul(&self.b)? != self.b {
            return Err(Error::VerificationFailed("b = f^{n-1}*b".into()));
        }
        if self.b.mul(&ep)? != self.b {
            return Err(Error::VerificationFailed("b = b*e^{n-1}".into()));
        }
        Ok(())
    }

    pub fn is_normalized(&self) -> bool {
        self.verify_normalized().is_ok()
    }

    /// Assemble from raw parts without verification; callers must verify
    /// before handing the witness out.
    pub(crate) fn assemble(n: u32, e: CycMatrix, f: CycMatrix, a: CycMatrix, b: CycMatrix) -> Self {
        EquivWitness { n, e, f, a, b }
    }
}

/// Invertible `z` with `z e z^{-1} = f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimWitness {
    n: u32,
    e: CycMatrix,
    f: CycMatrix,
    z: CycMatrix,
    z_inv: CycMatrix,
}

impl SimWitness {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn e(&self) -> &CycMatrix {
        &self.e
    }

    pub fn f(&self) -> &CycMatrix {
        &self.f
    }

    pub fn z(&self) -> &CycMatrix {
        &self.z
    }

    pub fn z_inv(&self) -> &CycMatrix {
        &self.z_inv
    }

    pub fn verify(&self) -> Result<()> {
        let id = CycMatrix::identity(self.z.order(), self.z.rows());
        if self.z.mul(&self.z_inv)? != id {
            return Err(Error::VerificationFailed("z*z_inv = 1".into()));
        }
        if self.z_inv.mul(&self.z)? != id {
            return Err(Error::VerificationFailed("z_inv*z = 1".into()));
        }
        if !self.e.is_npotent(self.n)? {
            return Err(Error::VerificationFailed(format!("e^{} = e", self.n)));
        }
        if !self.f.is_npotent(self.n)? {
            return Err(Error::VerificationFailed(format!("f^{} = f", self.n)));
        }
        if self.z.mul(&self.e)?.mul(&self.z_inv)? != self.f {
            return Err(Error::VerificationFailed("z*e*z_inv = f".into()));
        }
        Ok(())
    }
}

/// Either certificate kind, as serialized by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    #[serde(rename = "algebraic")]
    Algebraic(EquivWitness),
    #[serde(rename = "similarity")]
    Similarity(SimWitness),
}

impl Witness {
    pub fn verify(&self) -> Result<()> {
        match self {
            Witness::Algebraic(w) => w.verify(),
            Witness::Similarity(w) => w.verify(),
        }
    }
}

fn ensure_valid_input(e: &CycMatrix, f: &CycMatrix, a0: &CycMatrix, b0: &CycMatrix, n: u32) -> Result<()> {
    if !e.is_npotent(n)? || !f.is_npotent(n)? {
        return Err(Error::InvalidWitness(format!("e and f must be {n}-potents")));
    }
    if a0.mul(b0)? != *e {
        return Err(Error::InvalidWitness("input pair fails a0*b0 = e".into()));
    }
    if b0.mul(a0)? != *f {
        return Err(Error::InvalidWitness("input pair fails b0*a0 = f".into()));
    }
    Ok(())
}

/// Replace a raw witness pair by the normalized pair
/// `a = e^{n-1} a0 f^{n-1}`, `b = f^{n-1} b0 e^{n-1}`.
pub fn normalize_algebraic(
    e: &CycMatrix,
    f: &CycMatrix,
    a0: &CycMatrix,
    b0: &CycMatrix,
    n: u32,
) -> Result<EquivWitness> {
    ensure_valid_input(e, f, a0, b0, n)?;
    let nm1 = (n - 1) as u64;
    let ep = e.pow(nm1)?;
    let fp = f.pow(nm1)?;
    let a = ep.mul(a0)?.mul(&fp)?;
    let b = fp.mul(b0)?.mul(&ep)?;
    let w = EquivWitness { n, e: e.clone(), f: f.clone(), a, b };
    w.verify_normalized()?;
    Ok(w)
}

/// Chain two witnesses across a shared middle term: `s = a f^{n-2} c`,
/// `t = d b` give `st = e`, `ts = g`.
pub fn compose_transitive(w1: &EquivWitness, w2: &EquivWitness) -> Result<EquivWitness> {
    if w1.n != w2.n {
        return Err(Error::InvalidWitness(format!("exponent mismatch: {} vs {}", w1.n, w2.n)));
    }
    if w1.f != w2.e {
        return Err(Error::InvalidWitness("middle terms disagree: w1.f != w2.e".into()));
    }
    let n = w1.n;
    let fp = w1.f.pow((n - 2) as u64)?;
    let s = w1.a.mul(&fp)?.mul(&w2.a)?;
    let t = w2.b.mul(&w1.b)?;
    let w = EquivWitness { n, e: w1.e.clone(), f: w2.f.clone(), a: s, b: t };
    w.verify()?;
    Ok(w)
}

/// Convert a similarity `f = z e z^{-1}` into an algebraic witness
/// `a = e z^{-1}`, `b = z e^{n-1}`.
pub fn from_similarity(e: &CycMatrix, z: &CycMatrix, n: u32) -> Result<EquivWitness> {
    if !e.is_npotent(n)? {
        return Err(Error::NotNPotent { n });
    }
    let z_inv = z.inverse()?;
    let f = z.mul(e)?.mul(&z_inv)?;
    let a = e.mul(&z_inv)?;
    let b = z.mul(&e.pow((n - 1) as u64)?)?;
    let w = EquivWitness { n, e: e.clone(), f, a, b };
    w.verify()?;
    Ok(w)
}

/// Promote a normalized algebraic witness to an explicit similarity of
/// `e (+) 0` and `f (+) 0` in doubled matrices: with
/// `u = [[1 - f^{n-1}, b], [a f^{n-2}, 1 - e^{n-1}]]` and
/// `v = [[1 - e^{n-1}, e^{n-1}], [e^{n-1}, 1 - e^{n-1}]]`, both `u^2` and
/// `v^2` are the identity and `z = uv` conjugates `e (+) 0` to `f (+) 0`.
pub fn stable_similarity(w: &EquivWitness) -> Result<SimWitness> {
    w.verify_normalized().map_err(|_| {
        Error::InvalidWitness("witness must be normalized first (see normalize_algebraic)".into())
    })?;
    let n = w.n;
    let s = w.e.rows();
    let order = w.e.order();
    let id = CycMatrix::identity(order, s);
    let zero = CycMatrix::zeros(order, s, s);
    let ep = w.e.pow((n - 1) as u64)?;
    let fp = w.f.pow((n - 1) as u64)?;
    let fp2 = w.f.pow((n - 2) as u64)?;
    let u = from_blocks_2x2(&id.sub(&fp)?, &w.b, &w.a.mul(&fp2)?, &id.sub(&ep)?)?;
    let v = from_blocks_2x2(&id.sub(&ep)?, &ep, &ep, &id.sub(&ep)?)?;
    let big_id = CycMatrix::identity(u.order(), 2 * s);
    if u.mul(&u)? != big_id {
        return Err(Error::VerificationFailed("u^2 = 1".into()));
    }
    if v.mul(&v)? != big_id {
        return Err(Error::VerificationFailed("v^2 = 1".into()));
    }
    let z = u.mul(&v)?;
    let z_inv = v.mul(&u)?;
    let e0 = from_blocks_2x2(&w.e, &zero, &zero, &zero)?;
    let f0 = from_blocks_2x2(&w.f, &zero, &zero, &zero)?;
    let sim = SimWitness { n, e: e0, f: f0, z, z_inv };
    sim.verify()?;
    Ok(sim)
}

/// Witness for `diag(e, f) ~ diag(f, e)`:
/// `a = [[0, e], [f, 0]]`, `b = [[0, f^{n-1}], [e^{n-1}, 0]]`.
pub fn swap_witness(e: &CycMatrix, f: &CycMatrix, n: u32) -> Result<EquivWitness> {
    if e.rows() != f.rows() || !e.is_square() || !f.is_square() {
        return Err(Error::DimensionMismatch("swap needs equal-size square n-potents".into()));
    }
    if !e.is_npotent(n)? || !f.is_npotent(n)? {
        return Err(Error::NotNPotent { n });
    }
    let order = e.order();
    let zero = CycMatrix::zeros(order, e.rows(), e.rows());
    let a = from_blocks_2x2(&zero, e, f, &zero)?;
    let b = from_blocks_2x2(&zero, &f.pow((n - 1) as u64)?, &e.pow((n - 1) as u64)?, &zero)?;
    let ef = from_blocks_2x2(e, &zero, &zero, f)?;
    let fe = from_blocks_2x2(f, &zero, &zero, e)?;
    let w = EquivWitness { n, e: ef, f: fe, a, b };
    w.verify()?;
    Ok(w)
}

/// Witness for `diag(e, f) ~ diag(e + f, 0)` when `e` and `f` are
/// orthogonal: `a = [[e, 0], [f, 0]]`, `b = [[e^{n-1}, f^{n-1}], [0, 0]]`.
pub fn absorb_witness(e: &CycMatrix, f: &CycMatrix, n: u32) -> Result<EquivWitness> {
    if e.rows() != f.rows() || !e.is_square() || !f.is_square() {
        return Err(Error::DimensionMismatch("absorb needs equal-size square n-potents".into()));
    }
    if !e.is_npotent(n)? || !f.is_npotent(n)? {
        return Err(Error::NotNPotent { n });
    }
    if !e.mul(f)?.is_zero() || !f.mul(e)?.is_zero() {
        return Err(Error::InvalidWitness("absorb requires e and f orthogonal".into()));
    }
    let order = e.order();
    let zero = CycMatrix::zeros(order, e.rows(), e.rows());
    let a = from_blocks_2x2(e, &zero, f, &zero)?;
    let b = from_blocks_2x2(&e.pow((n - 1) as u64)?, &f.pow((n - 1) as u64)?, &zero, &zero)?;
    let ef = from_blocks_2x2(e, &zero, &zero, f)?;
    let sum0 = from_blocks_2x2(&e.add(f)?, &zero, &zero, &zero)?;
    let w = EquivWitness { n, e: ef, f: sum0, a, b };
    w.verify()?;
    Ok(w)
}

/// Add two normalized witnesses along orthogonal supports:
/// `(a_1 + a_2, b_1 + b_2)` witnesses `e_1 + e_2 ~ f_1 + f_2`.
pub fn sum_witness(w1: &EquivWitness, w2: &EquivWitness) -> Result<EquivWitness> {
    if w1.n != w2.n {
        return Err(Error::InvalidWitness(format!("exponent mismatch: {} vs {}", w1.n, w2.n)));
    }
    if !w1.is_normalized() || !w2.is_normalized() {
        return Err(Error::InvalidWitness("sum requires normalized witnesses".into()));
    }
    let orth = |x: &CycMatrix, y: &CycMatrix| -> Result<bool> {
        Ok(x.mul(y)?.is_zero() && y.mul(x)?.is_zero())
    };
    if !orth(&w1.e, &w2.e)? || !orth(&w1.f, &w2.f)? {
        return Err(Error::InvalidWitness("sum requires e1 _|_ e2 and f1 _|_ f2".into()));
    }
    let w = EquivWitness {
        n: w1.n,
        e: w1.e.add(&w2.e)?,
        f: w1.f.add(&w2.f)?,
        a: w1.a.add(&w2.a)?,
        b: w1.b.add(&w2.b)?,
    };
    w.verify()?;
    Ok(w)
}

/// The explicit intertwiner
/// `v = e^{n-1} f^{n-1} + (n-1)(1 - e^{n-1})(1 - f^{n-1})
///      + sum_{k=1}^{n-2} e^k f^{(n-1)-k}`
/// satisfying `e v = v f` for every pair of n-potents; for `n = 2` the
/// middle sum is empty.  When `v` is invertible it realizes the similarity
/// `v f v^{-1} = e`, returned as a witness in `(f, e)` orientation.
pub fn intertwiner(
    e: &CycMatrix,
    f: &CycMatrix,
    n: u32,
) -> Result<(CycMatrix, bool, Option<SimWitness>)> {
    if e.rows() != f.rows() {
        return Err(Error::DimensionMismatch("intertwiner needs equal sizes".into()));
    }
    if !e.is_npotent(n)? || !f.is_npotent(n)? {
        return Err(Error::NotNPotent { n });
    }
    let s = e.rows();
    let order = num_integer::lcm(e.order(), f.order());
    let e = e.lift(order)?;
    let f = f.lift(order)?;
    let id = CycMatrix::identity(order, s);
    let ep = e.pow((n - 1) as u64)?;
    let fp = f.pow((n - 1) as u64)?;
    let nm1 = crate::cyclofield::CycNum::from_i64((n - 1) as i64, order);
    let mut v = ep.mul(&fp)?;
    v = v.add(&id.sub(&ep)?.mul(&id.sub(&fp)?)?.scale(&nm1))?;
    for k in 1..=(n as i64 - 2).max(0) as u64 {
        v = v.add(&e.pow(k)?.mul(&f.pow((n - 1) as u64 - k)?)?)?;
    }
    if e.mul(&v)? != v.mul(&f)? {
        return Err(Error::VerificationFailed("e*v = v*f".into()));
    }
    let invertible = !v.det()?.is_zero();
    let sim = if invertible {
        let v_inv = v.inverse()?;
        let sim = SimWitness { n, e: f.clone(), f: e.clone(), z: v.clone(), z_inv: v_inv };
        sim.verify()?;
        Some(sim)
    } else {
        None
    };
    Ok((v, invertible, sim))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClosenessReport {
    pub bound: f64,
    pub distance: f64,
    pub within: bool,
}

/// Numeric check of the closeness hypothesis under which the intertwiner is
/// guaranteed invertible: Frobenius norms (submultiplicative, so they
/// satisfy the Banach-algebra hypotheses), with
/// `bound = 2(n-1) / ((n^2 + n + 2) (1 + ||e||)^{2n})`.
pub fn closeness_bound_check(
    e: &CycMatrix,
    f: &CycMatrix,
    n: u32,
    precision_bits: u32,
) -> Result<ClosenessReport> {
    if e.rows() != f.rows() || e.cols() != f.cols() {
        return Err(Error::DimensionMismatch("closeness check needs equal shapes".into()));
    }
    let norm_e = e.frobenius_norm(precision_bits);
    let nf = n as f64;
    let m = (1.0 + norm_e).powf(2.0 * nf);
    let bound = 2.0 * (nf - 1.0) / ((nf * nf + nf + 2.0) * m);
    let distance = e.sub(f)?.frobenius_norm(precision_bits);
    Ok(ClosenessReport { bound, distance, within: distance < bound })
}
