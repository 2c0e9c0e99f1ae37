//! n-homomorphisms between cyclotomic fields: additive maps that are
//! multiplicative on n-fold products, `phi(a_1 ... a_n) = phi(a_1) ...
//! phi(a_n)`.
//!
//! A map is stored as its matrix on the power basis, so additivity is
//! structural and the defining identity only needs to be checked on basis
//! n-tuples: both sides are Q-multilinear, and the check is exact and
//! finite.  Valid maps send n-potents to n-potents entrywise, transport
//! equivalence witnesses, and induce maps of K-classes.

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclofield::{conductor_normalize, euler_phi, CycNum, Rational};
use crate::error::{Error, Result};
use crate::exactmat::CycMatrix;
use crate::kgroup::{class_of, representative, KClass};
use crate::witness::EquivWitness;

/// A Q-linear map `Q(zeta_source) -> Q(zeta_target)` tagged with the
/// exponent `n` it is tested against.  Row `i` of the matrix is the image
/// of `zeta_source^i` on the power basis of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct NHomSpec {
    n: u32,
    source_order: u64,
    target_order: u64,
    matrix: Vec<Vec<Rational>>,
}

impl NHomSpec {
    pub fn new(n: u32, source_order: u64, target_order: u64, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidNHom(format!("n = {n} < 2")));
        }
        let source_order = conductor_normalize(source_order);
        let target_order = conductor_normalize(target_order);
        let srows = euler_phi(source_order) as usize;
        let tcols = euler_phi(target_order) as usize;
        if matrix.len() != srows || matrix.iter().any(|r| r.len() != tcols) {
            return Err(Error::InvalidNHom(format!(
                "matrix must be {srows} x {tcols} for source order {source_order} and target order {target_order}"
            )));
        }
        Ok(NHomSpec { n, source_order, target_order, matrix })
    }

    pub fn identity(order: u64, n: u32) -> Self {
        let order = conductor_normalize(order);
        let d = euler_phi(order) as usize;
        let matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            Rational::from_integer(1.into())
                        } else {
                            Rational::from_integer(0.into())
                        }
                    })
                    .collect()
            })
            .collect();
        NHomSpec { n, source_order: order, target_order: order, matrix }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn source_order(&self) -> u64 {
        self.source_order
    }

    pub fn target_order(&self) -> u64 {
        self.target_order
    }

    /// Image of a source-field element.
    pub fn apply_num(&self, x: &CycNum) -> Result<CycNum> {
        let x = x
            .descend(self.source_order)
            .ok_or(Error::FieldViolation { order: self.source_order })?;
        let tcols = euler_phi(self.target_order) as usize;
        let mut out = vec![Rational::from_integer(0.into()); tcols];
        for (i, c) in x.coeffs().iter().enumerate() {
            if c == &Rational::from_integer(0.into()) {
                continue;
            }
            for (j, m) in self.matrix[i].iter().enumerate() {
                out[j] += c * m;
            }
        }
        Ok(CycNum::new(self.target_order, out))
    }

    /// `outer(inner(x))`; the inner target and outer source must agree.
    pub fn compose(outer: &NHomSpec, inner: &NHomSpec) -> Result<NHomSpec> {
        if inner.target_order != outer.source_order {
            return Err(Error::SignatureMismatch(format!(
                "cannot compose: inner target {} != outer source {}",
                inner.target_order, outer.source_order
            )));
        }
        if inner.n != outer.n {
            return Err(Error::SignatureMismatch("exponent mismatch in composition".into()));
        }
        let rows = inner.matrix.len();
        let mid = outer.matrix.len();
        let cols = euler_phi(outer.target_order) as usize;
        let mut matrix = vec![vec![Rational::from_integer(0.into()); cols]; rows];
        for i in 0..rows {
            for k in 0..mid {
                let c = &inner.matrix[i][k];
                if c == &Rational::from_integer(0.into()) {
                    continue;
                }
                for j in 0..cols {
                    let delta = c * &outer.matrix[k][j];
                    matrix[i][j] += delta;
                }
            }
        }
        NHomSpec::new(inner.n, inner.source_order, outer.target_order, matrix)
    }
}

/// The multiplication map `x -> c * x` on the field of `c`; an
/// n-homomorphism exactly when `c^n = c`.
pub fn scalar_nhom(c: &CycNum, n: u32) -> NHomSpec {
    let order = c.order();
    let d = euler_phi(order) as usize;
    let matrix = (0..d)
        .map(|i| {
            let img = c * &CycNum::root_of_unity(order, i as i64);
            img.coeffs().to_vec()
        })
        .collect();
    NHomSpec { n, source_order: order, target_order: order, matrix }
}

/// The field map `zeta_m -> zeta_m^t`; a ring homomorphism (hence an
/// n-homomorphism for every n) when `gcd(t, m) = 1`.
pub fn power_map_spec(order: u64, t: u64, n: u32) -> NHomSpec {
    let order = conductor_normalize(order);
    let d = euler_phi(order) as usize;
    let matrix = (0..d)
        .map(|i| {
            let img = CycNum::root_of_unity(order, (t as i64) * (i as i64));
            img.coeffs().to_vec()
        })
        .collect();
    NHomSpec { n, source_order: order, target_order: order, matrix }
}

/// Exhaustively check the defining identity on all n-tuples of power-basis
/// elements; by multilinearity this decides it for the whole field.
pub fn check_nhom(spec: &NHomSpec) -> Result<bool> {
    let d = euler_phi(spec.source_order) as usize;
    let n = spec.n as usize;
    let images: Vec<CycNum> = (0..d)
        .map(|i| spec.apply_num(&CycNum::root_of_unity(spec.source_order, i as i64)))
        .collect::<Result<Vec<_>>>()?;
    let mut idx = vec![0usize; n];
    loop {
        let exponent: usize = idx.iter().sum();
        let product = CycNum::root_of_unity(spec.source_order, exponent as i64);
        let lhs = spec.apply_num(&product)?;
        let mut rhs = CycNum::one(spec.target_order);
        for &i in &idx {
            rhs = &rhs * &images[i];
        }
        if lhs != rhs {
            return Ok(false);
        }
        // advance the odometer
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(true);
            }
            idx[pos] += 1;
            if idx[pos] < d {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn ensure_nhom(spec: &NHomSpec) -> Result<()> {
    if !check_nhom(spec)? {
        return Err(Error::InvalidNHom(format!(
            "map is not a {}-homomorphism on Q(zeta_{})",
            spec.n, spec.source_order
        )));
    }
    Ok(())
}

/// Apply the map to every matrix entry; images of n-potents under valid
/// specs are again n-potents.
pub fn apply_entrywise(spec: &NHomSpec, a: &CycMatrix) -> Result<CycMatrix> {
    let entries = a
        .entries()
        .iter()
        .map(|e| spec.apply_num(e))
        .collect::<Result<Vec<_>>>()?;
    CycMatrix::new(spec.target_order, a.rows(), a.cols(), entries)
}

/// Push an equivalence witness through the map:
/// `a' = phi(e a) phi(f)^{n-2}`, `b' = phi(b)` witness
/// `phi(e) ~ phi(f)`.
pub fn transport_witness(spec: &NHomSpec, w: &EquivWitness) -> Result<EquivWitness> {
    if spec.n != w.n() {
        return Err(Error::SignatureMismatch(format!(
            "spec n = {} but witness n = {}",
            spec.n,
            w.n()
        )));
    }
    ensure_nhom(spec)?;
    w.verify().map_err(|_| Error::InvalidWitness("transport input does not verify".into()))?;
    let n = spec.n;
    let fe = apply_entrywise(spec, w.e())?;
    let ff = apply_entrywise(spec, w.f())?;
    let ea = w.e().mul(w.a())?;
    let a_new = apply_entrywise(spec, &ea)?.mul(&ff.pow((n - 2) as u64)?)?;
    let b_new = apply_entrywise(spec, w.b())?;
    let out = EquivWitness::assemble(n, fe, ff, a_new, b_new);
    out.verify()?;
    Ok(out)
}

/// The induced map on K-classes, computed through explicit representatives
/// of the positive and negative parts.
pub fn induced_kmap(spec: &NHomSpec, x: &KClass) -> Result<KClass> {
    if x.base_order() != spec.source_order || x.n() != spec.n {
        return Err(Error::SignatureMismatch(format!(
            "class lives over (n, base) = ({}, {}), spec over ({}, {})",
            x.n(),
            x.base_order(),
            spec.n,
            spec.source_order
        )));
    }
    ensure_nhom(spec)?;
    let (pos, neg) = x.split_parts();
    let mut out = KClass::zero(spec.n, spec.target_order);
    for (part, sign) in [(pos, 1), (neg, -1)] {
        let rep = representative(&part)?;
        let img = apply_entrywise(spec, &rep)?;
        let cls = class_of(&img, spec.n, spec.target_order)?;
        out = if sign > 0 { out.add(&cls)? } else { out.sub(&cls)? };
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
struct SpecRepr {
    n: u32,
    source_m: u64,
    target_m: u64,
    matrix: Vec<Vec<CoeffRepr>>,
}

impl Serialize for NHomSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("NHomSpec", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("source_m", &self.source_order)?;
        st.serialize_field("target_m", &self.target_order)?;
        let rows: Vec<Vec<String>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect();
        st.serialize_field("matrix", &rows)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for NHomSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(deserializer)?;
        let matrix = repr
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        CoeffRepr::Int(v) => Ok(Rational::from_integer((*v).into())),
                        CoeffRepr::Str(s) => crate::cyclofield::parse_rational(s),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        NHomSpec::new(repr.n, repr.source_m, repr.target_m, matrix).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::generator_quadripotent_q4;
    use crate::npotent::random_npotent;
    use crate::witness::from_similarity;

    #[test]
    fn check_nhom_examples() {
        for n in 2..=5u32 {
            assert!(check_nhom(&NHomSpec::identity(12, n)).unwrap());
        }
        // doubling is not a 2-homomorphism
        let double = scalar_nhom(&CycNum::from_i64(2, 1), 2);
        assert!(!check_nhom(&double).unwrap());
        // x -> zeta_{n-1} x is an n-homomorphism
        for n in 3..=5u32 {
            let z = CycNum::root_of_unity((n - 1) as u64, 1);
            assert!(check_nhom(&scalar_nhom(&z, n)).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn scalar_nhom_examples() {
        assert!(check_nhom(&scalar_nhom(&CycNum::one(1), 2)).unwrap());
        assert!(check_nhom(&scalar_nhom(&CycNum::one(1), 5)).unwrap());
        // c = -1 for n = 3: tri-homomorphism but not a ring homomorphism
        let neg = scalar_nhom(&CycNum::from_i64(-1, 1), 3);
        assert!(check_nhom(&neg).unwrap());
        let neg2 = scalar_nhom(&CycNum::from_i64(-1, 1), 2);
        assert!(!check_nhom(&neg2).unwrap());
        // c = zeta_3 for n = 4 over Q(zeta_3)
        let z3 = CycNum::root_of_unity(3, 1);
        assert!(check_nhom(&scalar_nhom(&z3, 4)).unwrap());
        // and zeta_3^4 = zeta_3 is the reason; zeta_4 fails for n = 4
        let z4 = CycNum::root_of_unity(4, 1);
        assert!(!check_nhom(&scalar_nhom(&z4, 4)).unwrap());
    }

    #[test]
    fn ring_homs_pass_for_all_n() {
        // power maps zeta -> zeta^t with gcd(t, m) = 1 are ring homs
        for t in [1u64, 5, 7, 11] {
            for n in 2..=5u32 {
                assert!(check_nhom(&power_map_spec(12, t, n)).unwrap(), "t={t} n={n}");
            }
        }
    }

    #[test]
    fn apply_entrywise_examples() {
        let e = generator_quadripotent_q4();
        let id = NHomSpec::identity(4, 4);
        assert_eq!(apply_entrywise(&id, &e).unwrap(), e);
        // scalar -1 on a tripotent
        let t = CycMatrix::from_i64(1, &[&[1, 0], &[0, -1]]);
        let neg = scalar_nhom(&CycNum::from_i64(-1, 1), 3);
        let img = apply_entrywise(&neg, &t).unwrap();
        assert_eq!(img, CycMatrix::from_i64(1, &[&[-1, 0], &[0, 1]]));
        assert!(img.is_npotent(3).unwrap());
        // scalar zeta_3 for n = 4 on the generator quadripotent over Q(zeta_12)
        let z3 = CycNum::root_of_unity(3, 1);
        let spec = scalar_nhom(&z3.lift(12).unwrap(), 4);
        assert!(check_nhom(&spec).unwrap());
        let lifted = e.lift(12).unwrap();
        let img = apply_entrywise(&spec, &lifted).unwrap();
        assert!(img.is_npotent(4).unwrap());
    }

    #[test]
    fn transport_examples() {
        let e = generator_quadripotent_q4();
        let z = CycMatrix::from_i64(4, &[&[1, 1, 0], &[0, 1, 2], &[0, 0, 1]]);
        let w = from_similarity(&e, &z, 4).unwrap();
        // identity transport verifies on the same pair
        let id = NHomSpec::identity(4, 4);
        let tw = transport_witness(&id, &w).unwrap();
        assert_eq!(tw.e(), w.e());
        assert_eq!(tw.f(), w.f());
        // scalar -1 on a tripotent witness
        let t = random_npotent(3, 1, 3, &[1, 1, 1], 17).unwrap();
        let zt = CycMatrix::from_i64(1, &[&[1, 0, -1], &[0, 1, 1], &[0, 0, 1]]);
        let wt = from_similarity(&t, &zt, 3).unwrap();
        let neg = scalar_nhom(&CycNum::from_i64(-1, 1), 3);
        transport_witness(&neg, &wt).unwrap().verify().unwrap();
        // scalar zeta_3 on a quadripotent witness over Q(zeta_12)
        let z3 = CycNum::root_of_unity(3, 1).lift(12).unwrap();
        let spec = scalar_nhom(&z3, 4);
        let we = e.lift(12).unwrap();
        let w12 = from_similarity(&we, &z.lift(12).unwrap(), 4).unwrap();
        transport_witness(&spec, &w12).unwrap().verify().unwrap();
        // invalid spec is rejected
        let bad = scalar_nhom(&CycNum::from_i64(2, 1), 4);
        assert!(matches!(transport_witness(&bad, &wt), Err(_)));
    }

    #[test]
    fn induced_kmap_examples() {
        // identity fixes classes
        let id = NHomSpec::identity(4, 4);
        let x = KClass::new(4, 4, vec![2, 2]).unwrap();
        assert_eq!(induced_kmap(&id, &x).unwrap(), x);
        // any valid spec kills the zero class
        let z3 = CycNum::root_of_unity(3, 1).lift(12).unwrap();
        let spec = scalar_nhom(&z3, 4);
        let zero = KClass::zero(4, 12);
        assert!(induced_kmap(&spec, &zero).unwrap().is_zero());
        // additivity on a pair over Q(zeta_12)
        let a = KClass::new(4, 12, vec![1, 2, 0]).unwrap();
        let b = KClass::new(4, 12, vec![0, 1, 3]).unwrap();
        let lhs = induced_kmap(&spec, &a.add(&b).unwrap()).unwrap();
        let rhs = induced_kmap(&spec, &a).unwrap().add(&induced_kmap(&spec, &b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_functoriality() {
        let s1 = power_map_spec(12, 5, 4);
        let s2 = power_map_spec(12, 7, 4);
        let comp = NHomSpec::compose(&s2, &s1).unwrap();
        assert!(check_nhom(&comp).unwrap());
        for vals in [vec![1i64, 0, 2], vec![0, 3, 1]] {
            let x = KClass::new(4, 12, vals).unwrap();
            let step = induced_kmap(&s2, &induced_kmap(&s1, &x).unwrap()).unwrap();
            let direct = induced_kmap(&comp, &x).unwrap();
            assert_eq!(step, direct);
        }
    }

    #[test]
    fn spec_json_roundtrip() {
        let z3 = CycNum::root_of_unity(3, 1);
        let spec = scalar_nhom(&z3, 4);
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("\"source_m\":3"));
        let back: NHomSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        let parsed: NHomSpec = serde_json::from_str(
            r#"{"n": 2, "source_m": 4, "target_m": 4, "matrix": [["1", 0], [0, "1"]]}"#,
        )
        .unwrap();
        assert_eq!(parsed, NHomSpec::identity(4, 2));
        // wrong shape rejected
        let bad: std::result::Result<NHomSpec, _> =
            serde_json::from_str(r#"{"n": 2, "source_m": 4, "target_m": 4, "matrix": [["1"]]}"#);
        assert!(bad.is_err());
    }
}
