//! Regression harness: every computed fact the library is expected to
//! reproduce, bundled as named checks with pass/fail results.
//!
//! The CLI `check-paper` subcommand runs the whole battery; the acceptance
//! test suite drives the same functions one criterion at a time.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclofield::{galois_orbits, omega_order, CycNum, Rational};
use crate::error::Result;
use crate::exactmat::{direct_sum, generator_quadripotent_q4, CycMatrix};
use crate::kgroup::{class_of, group_structure, phi, psi, representative, KClass};
use crate::nhom::{apply_entrywise, check_nhom, induced_kmap, scalar_nhom, transport_witness, NHomSpec};
use crate::npotent::{
    decompose, quadripotent_split_q4, random_conjugator, random_npotent, random_rank_pattern,
    recompose, tripotent_split,
};
use crate::witness::{
    closeness_bound_check, compose_transitive, from_similarity, intertwiner, normalize_algebraic,
    stable_similarity,
};

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type CheckResult = std::result::Result<String, String>;

fn run_one(name: &str, f: impl FnOnce() -> CheckResult) -> CheckReport {
    let start = Instant::now();
    let outcome = f();
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => CheckReport { name: name.into(), passed: true, detail, seconds },
        Err(detail) => CheckReport { name: name.into(), passed: false, detail, seconds },
    }
}

fn fail<T>(msg: String) -> std::result::Result<T, String> {
    Err(msg)
}

macro_rules! expect {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return fail(format!($($arg)*));
        }
    };
}

fn ok_or<T>(r: Result<T>, ctx: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{ctx}: {e}"))
}

/// Check 1: the computed group table over small cyclotomic bases.
pub fn check_group_table() -> CheckResult {
    let table = [
        (2u32, 4u64, "Z", vec![1usize]),
        (3, 4, "Z (+) Z", vec![1, 1]),
        (4, 4, "Z (+) 2Z", vec![1, 2]),
        (5, 4, "Z (+) Z (+) Z (+) Z", vec![1, 1, 1, 1]),
        (4, 3, "Z (+) Z (+) Z", vec![1, 1, 1]),
    ];
    for (n, base, rendered, indices) in table {
        let g = group_structure(n, base);
        expect!(
            g.to_string() == rendered,
            "group (n={n}, base={base}) rendered {:?}, expected {rendered:?}",
            g.to_string()
        );
        expect!(
            g.indices() == indices,
            "group (n={n}, base={base}) indices {:?}, expected {indices:?}",
            g.indices()
        );
    }
    // the fourth invariant separates the bases 3 and 4
    expect!(
        group_structure(4, 4) != group_structure(4, 3),
        "n = 4 invariants over bases 3 and 4 must differ"
    );
    Ok("5 group structures match, including Z (+) 2Z for (n, base) = (4, 4)".into())
}

/// Check 2: the explicit 3x3 generator quadripotent.
pub fn check_generator_matrix() -> CheckResult {
    let e = generator_quadripotent_q4();
    expect!(ok_or(e.is_npotent(4), "is_npotent")?, "generator matrix must be a quadripotent");
    let (e1, e23) = ok_or(quadripotent_split_q4(&e), "split")?;
    let t1 = ok_or(e1.trace_int(), "trace e1")?;
    let t23 = ok_or(e23.trace_int(), "trace e23")?;
    expect!(t1 == 1.into(), "trace(e1) = {t1}, expected 1");
    expect!(t23 == 2.into(), "trace(e2 + e3) = {t23}, expected 2");
    let c = ok_or(class_of(&e, 4, 4), "class_of")?;
    expect!(c.values() == [1, 2], "class = {:?}, expected [1, 2]", c.values());
    Ok("3x3 generator: quadripotent, split traces (1, 2), class (1, 2)".into())
}

/// Check 3: decompose/recompose round-trips with all partition invariants,
/// across the sampling grid.
pub fn check_decomposition_suite(samples: usize, seed: u64) -> CheckResult {
    let ns = [2u32, 3, 4, 5, 6];
    let orders = [1u64, 3, 4, 5, 12];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let n = ns[rng.gen_range(0..ns.len())];
        let order = orders[rng.gen_range(0..orders.len())];
        let size = rng.gen_range(1..=6usize);
        let ranks = random_rank_pattern(n, order, size, &mut rng);
        let e = ok_or(
            random_npotent(n, order, size, &ranks, seed ^ (i as u64)),
            &format!("sample {i} generation (n={n}, m={order}, size={size})"),
        )?;
        let p = ok_or(decompose(&e, n), &format!("sample {i} decompose"))?;
        ok_or(p.verify(), &format!("sample {i} partition invariants (n={n}, m={order})"))?;
        let back = ok_or(recompose(&p), &format!("sample {i} recompose"))?;
        let lifted = ok_or(e.lift(p.order()), "lift")?;
        expect!(back == lifted, "sample {i}: recompose(decompose(e)) != e (n={n}, m={order}, size={size})");
        // rank = trace for every idempotent component (characteristic 0)
        for (k, c) in p.components().iter().enumerate() {
            let t = ok_or(c.trace_int(), "component trace")?;
            expect!(
                t == c.rank().into(),
                "sample {i}: component {k} has rank {} but trace {t}",
                c.rank()
            );
        }
    }
    Ok(format!("{samples} random n-potents decomposed and round-tripped exactly"))
}

/// Check 4: normalized witnesses promote to exact 2x2 similarities, and
/// transitive composition verifies.
pub fn check_witness_suite(samples: usize, seed: u64) -> CheckResult {
    let ns = [2u32, 3, 4, 5];
    let orders = [1u64, 3, 4, 12];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let n = ns[rng.gen_range(0..ns.len())];
        let order = orders[rng.gen_range(0..orders.len())];
        let size = rng.gen_range(1..=4usize);
        let ranks = random_rank_pattern(n, order, size, &mut rng);
        let e = ok_or(random_npotent(n, order, size, &ranks, seed ^ (i as u64 + 1)), "generation")?;
        let (z, _) = random_conjugator(size, &mut rng);
        let w = ok_or(from_similarity(&e, &z, n), &format!("sample {i} from_similarity"))?;
        let nw = ok_or(
            normalize_algebraic(w.e(), w.f(), w.a(), w.b(), n),
            &format!("sample {i} normalize"),
        )?;
        let sim = ok_or(stable_similarity(&nw), &format!("sample {i} stable_similarity (n={n})"))?;
        ok_or(sim.verify(), &format!("sample {i} similarity verification"))?;
        // transitivity: chain with a second conjugation
        let (z2, _) = random_conjugator(size, &mut rng);
        let w2 = ok_or(from_similarity(w.f(), &z2, n), &format!("sample {i} second witness"))?;
        let chained = ok_or(compose_transitive(&w, &w2), &format!("sample {i} composition"))?;
        ok_or(chained.verify(), &format!("sample {i} composed witness verification"))?;
    }
    Ok(format!("{samples} witness chains normalized, stabilized and composed exactly"))
}

/// Check 5: the intertwiner identity, the closeness bound, and the norm
/// floor for nonzero n-potents.
pub fn check_intertwiner_suite(samples: usize, seed: u64) -> CheckResult {
    let ns = [2u32, 3, 4, 5];
    let orders = [1u64, 3, 4];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut within_count = 0usize;
    let eps = Rational::new(1.into(), 1_000_000_000_000i64.into());
    for i in 0..samples {
        let n = ns[rng.gen_range(0..ns.len())];
        let order = orders[rng.gen_range(0..orders.len())];
        let size = rng.gen_range(1..=3usize);
        let ranks = random_rank_pattern(n, order, size, &mut rng);
        let e = ok_or(random_npotent(n, order, size, &ranks, seed ^ (i as u64 + 7)), "generation")?;
        // every fourth sample: a pair inside the closeness bound (equal, or
        // conjugate by 1 + eps*E with tiny rational eps)
        let f = match i % 4 {
            0 => e.clone(),
            1 if size >= 2 => {
                let mut t = CycMatrix::identity(e.order(), size);
                *t.entry_mut(0, 1) = CycNum::from_rational(eps.clone(), e.order());
                let ti = ok_or(t.inverse(), "perturbation inverse")?;
                ok_or(t.mul(&e).and_then(|m| m.mul(&ti)), "perturbation conjugate")?
            }
            _ => {
                let ranks = random_rank_pattern(n, order, size, &mut rng);
                ok_or(random_npotent(n, order, size, &ranks, seed ^ (i as u64 + 1000)), "generation")?
            }
        };
        let (v, invertible, sim) = ok_or(intertwiner(&e, &f, n), &format!("sample {i} intertwiner"))?;
        // e v = v f is re-checked here independently of the constructor
        let lhs = ok_or(e.lift(v.order()).and_then(|x| x.mul(&v)), "e*v")?;
        let rhs = ok_or(f.lift(v.order()).and_then(|x| v.mul(&x)), "v*f")?;
        expect!(lhs == rhs, "sample {i}: e*v != v*f (n={n})");
        let report = ok_or(closeness_bound_check(&e, &f, n, 64), "closeness")?;
        if report.within {
            within_count += 1;
            expect!(invertible, "sample {i}: within bound but intertwiner is singular (n={n})");
            let sim = sim.ok_or_else(|| format!("sample {i}: missing similarity witness"))?;
            ok_or(sim.verify(), &format!("sample {i}: intertwiner similarity verification"))?;
        }
        // norm floor
        if !e.is_zero() {
            let norm = e.frobenius_norm(64);
            expect!(norm > 1.0 - 1e-9, "sample {i}: nonzero n-potent has norm {norm} < 1 - 1e-9");
        }
    }
    expect!(within_count > 0, "no pair landed inside the closeness bound; suite is vacuous");
    Ok(format!(
        "{samples} intertwiners satisfy e*v = v*f; {within_count} pairs within the bound, all invertible"
    ))
}

/// Check 6: psi and phi invert each other on the split cases.
pub fn check_iso_roundtrip(samples: usize, seed: u64) -> CheckResult {
    let cells = [(3u32, 1u64), (3, 4), (4, 3), (4, 12), (5, 4)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (n, base) in cells {
        for i in 0..samples {
            let ranks: Vec<usize> = (1..n).map(|_| rng.gen_range(0..=3usize)).collect();
            let m = ok_or(phi(&ranks, n, base), &format!("phi (n={n}, base={base})"))?;
            let back = ok_or(psi(&m, n, base), &format!("psi (n={n}, base={base})"))?;
            expect!(back == ranks, "psi(phi({ranks:?})) = {back:?} over (n={n}, base={base})");
            if i % 5 == 0 {
                // phi . psi is the identity on classes of random n-potents
                let size = rng.gen_range(1..=4usize);
                let pattern = random_rank_pattern(n, base, size, &mut rng);
                let e = ok_or(
                    random_npotent(n, base, size, &pattern, seed ^ (i as u64 + 31)),
                    "generation",
                )?;
                let tuple = ok_or(psi(&e, n, base), "psi of sample")?;
                let again = ok_or(phi(&tuple, n, base), "phi of tuple")?;
                let c1 = ok_or(class_of(&e, n, base), "class of sample")?;
                let c2 = ok_or(class_of(&again, n, base), "class of rebuilt")?;
                expect!(c1 == c2, "phi(psi(e)) changed the class over (n={n}, base={base})");
            }
        }
    }
    Ok(format!("psi/phi inverted each other on {samples} tuples in each of {} cells", cells.len()))
}

/// Check 7: tripotent splits are orthogonal idempotent pairs, with additive
/// invariants under direct sum.
pub fn check_tripotent_suite(samples: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let size = rng.gen_range(1..=5usize);
        let ranks = random_rank_pattern(3, 1, size, &mut rng);
        let e = ok_or(random_npotent(3, 1, size, &ranks, seed ^ (i as u64 + 11)), "generation")?;
        let (e1, e2) = ok_or(tripotent_split(&e), &format!("sample {i} split"))?;
        expect!(ok_or(e1.mul(&e1), "e1^2")? == e1, "sample {i}: e1 not idempotent");
        expect!(ok_or(e2.mul(&e2), "e2^2")? == e2, "sample {i}: e2 not idempotent");
        expect!(ok_or(e1.mul(&e2), "e1*e2")?.is_zero(), "sample {i}: e1*e2 != 0");
        expect!(ok_or(e2.mul(&e1), "e2*e1")?.is_zero(), "sample {i}: e2*e1 != 0");
        expect!(ok_or(e1.sub(&e2), "e1 - e2")? == e, "sample {i}: e1 - e2 != e");
        // additivity of the invariant pair on direct sums
        let size2 = rng.gen_range(1..=3usize);
        let ranks2 = random_rank_pattern(3, 1, size2, &mut rng);
        let f = ok_or(random_npotent(3, 1, size2, &ranks2, seed ^ (i as u64 + 500)), "generation")?;
        let (f1, f2) = ok_or(tripotent_split(&f), "split f")?;
        let s = ok_or(direct_sum(&e, &f), "direct sum")?;
        let (s1, s2) = ok_or(tripotent_split(&s), "split sum")?;
        expect!(
            s1.rank() == e1.rank() + f1.rank() && s2.rank() == e2.rank() + f2.rank(),
            "sample {i}: split ranks are not additive on (+)"
        );
    }
    Ok(format!("{samples} tripotents split into exact orthogonal pairs with additive invariants"))
}

/// Check 8: the parity obstruction over `Q(i)` — unequal conjugate ranks
/// force entries outside the field, and in-field quadripotents always have
/// even `trace(e_2 + e_3)`.
pub fn check_parity_obstruction(samples: usize, seed: u64) -> CheckResult {
    // over Q(zeta_12) the orbits split, so rank(e_2) != rank(e_3) is realizable
    for values in [[0i64, 1, 0], [1, 2, 1], [0, 0, 3]] {
        let target = ok_or(KClass::new(4, 12, values.to_vec()), "target")?;
        let r = ok_or(representative(&target), "representative over Q(zeta_12)")?;
        expect!(ok_or(r.is_npotent(4), "npotent")?, "representative of {values:?} is not quadripotent");
        expect!(
            r.descend(4).is_none(),
            "representative of {values:?} has all entries in Q(i) despite rank(e_2) != rank(e_3)"
        );
    }
    // random corpus over Q(i): every split has even second trace
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let size = rng.gen_range(1..=5usize);
        let ranks = random_rank_pattern(4, 4, size, &mut rng);
        let e = ok_or(random_npotent(4, 4, size, &ranks, seed ^ (i as u64 + 13)), "generation")?;
        let (_, e23) = ok_or(quadripotent_split_q4(&e), &format!("sample {i} split"))?;
        let t = ok_or(e23.trace_int(), "trace")?;
        expect!((&t % 2i32) == 0i32.into(), "sample {i}: trace(e2 + e3) = {t} is odd");
    }
    Ok(format!(
        "3 out-of-field representatives detected; {samples} in-field quadripotents all have even trace(e2 + e3)"
    ))
}

/// Check 9: the telescoping factorization of `f^j - e^j`.
pub fn check_telescoping(samples: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders = [1u64, 4];
    for i in 0..samples {
        let n = rng.gen_range(2..=5u32);
        let order = orders[rng.gen_range(0..orders.len())];
        let size = rng.gen_range(1..=3usize);
        let r1 = random_rank_pattern(n, order, size, &mut rng);
        let r2 = random_rank_pattern(n, order, size, &mut rng);
        let e = ok_or(random_npotent(n, order, size, &r1, seed ^ (i as u64 + 17)), "generation")?;
        let f = ok_or(random_npotent(n, order, size, &r2, seed ^ (i as u64 + 18)), "generation")?;
        let diff = ok_or(f.sub(&e), "f - e")?;
        for j in 1..=(2 * n as u64) {
            let lhs = ok_or(
                f.pow(j).and_then(|fj| e.pow(j).and_then(|ej| fj.sub(&ej))),
                "power difference",
            )?;
            let mut rhs = CycMatrix::zeros(e.order(), size, size);
            for k in 1..=j {
                let term = ok_or(
                    f.pow(j - k)
                        .and_then(|a| a.mul(&diff))
                        .and_then(|a| e.pow(k - 1).and_then(|b| a.mul(&b))),
                    "term",
                )?;
                rhs = ok_or(rhs.add(&term), "sum")?;
            }
            expect!(lhs == rhs, "sample {i}: telescoping fails at j = {j} (n = {n})");
        }
    }
    Ok(format!("telescoping identity exact on {samples} pairs through j = 2n"))
}

/// Check 10: n-homomorphism functoriality end to end.
pub fn check_nhom_suite(class_pairs: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // scalar multiplication by zeta_{n-1} is always an n-homomorphism
    for n in 2..=5u32 {
        let z = CycNum::root_of_unity((n - 1) as u64, 1);
        let spec = scalar_nhom(&z, n);
        expect!(
            ok_or(check_nhom(&spec), "check_nhom")?,
            "scalar map by zeta_{} failed the {n}-homomorphism check",
            n - 1
        );
        // entrywise images of n-potents stay n-potent
        let base = omega_order(n);
        for trial in 0..5u64 {
            let size = rng.gen_range(1..=4usize);
            let ranks = random_rank_pattern(n, base, size, &mut rng);
            let e = ok_or(random_npotent(n, base, size, &ranks, seed ^ (trial + 23)), "generation")?;
            let img = ok_or(apply_entrywise(&spec, &e), "apply")?;
            expect!(ok_or(img.is_npotent(n), "image npotency")?, "image not an {n}-potent (n = {n})");
            // witness transport
            let (z, _) = random_conjugator(size, &mut rng);
            let w = ok_or(from_similarity(&e, &z, n), "witness")?;
            let tw = ok_or(transport_witness(&spec, &w), "transport")?;
            ok_or(tw.verify(), "transported witness verification")?;
        }
    }
    // induced map additivity over Q(zeta_12) for n = 4
    let z3 = ok_or(CycNum::root_of_unity(3, 1).lift(12), "lift")?;
    let spec = scalar_nhom(&z3, 4);
    let orbits = galois_orbits(4, 12);
    for i in 0..class_pairs {
        let rand_class = |rng: &mut ChaCha8Rng| -> std::result::Result<KClass, String> {
            let values: Vec<i64> = orbits
                .orbits()
                .iter()
                .map(|o| rng.gen_range(-2..=3i64) * o.len() as i64)
                .collect();
            ok_or(KClass::new(4, 12, values), "class build")
        };
        let x = rand_class(&mut rng)?;
        let y = rand_class(&mut rng)?;
        let lhs = ok_or(induced_kmap(&spec, &ok_or(x.add(&y), "x + y")?), "induced(x + y)")?;
        let fx = ok_or(induced_kmap(&spec, &x), "induced(x)")?;
        let fy = ok_or(induced_kmap(&spec, &y), "induced(y)")?;
        let rhs = ok_or(fx.add(&fy), "induced sum")?;
        expect!(lhs == rhs, "pair {i}: induced map is not additive");
    }
    // functor respects composition on a sample
    let s5 = crate::nhom::power_map_spec(12, 5, 4);
    let s7 = crate::nhom::power_map_spec(12, 7, 4);
    let comp = ok_or(NHomSpec::compose(&s7, &s5), "compose")?;
    let x = ok_or(KClass::new(4, 12, vec![1, 2, 0]), "class")?;
    let step = ok_or(
        induced_kmap(&s5, &x).and_then(|y| induced_kmap(&s7, &y)),
        "stepwise",
    )?;
    let direct = ok_or(induced_kmap(&comp, &x), "composed")?;
    expect!(step == direct, "(phi . psi)_* != phi_* . psi_* on the sample class");
    Ok(format!(
        "scalar n-homomorphisms valid for n = 2..5; additivity held on {class_pairs} class pairs"
    ))
}

/// Full battery at acceptance scale.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        run_one("group-table", check_group_table),
        run_one("generator-matrix", check_generator_matrix),
        run_one("decomposition", || check_decomposition_suite(200, seed)),
        run_one("witnesses", || check_witness_suite(100, seed)),
        run_one("intertwiner", || check_intertwiner_suite(100, seed)),
        run_one("iso-roundtrip", || check_iso_roundtrip(100, seed)),
        run_one("tripotent", || check_tripotent_suite(100, seed)),
        run_one("parity-obstruction", || check_parity_obstruction(50, seed)),
        run_one("telescoping", || check_telescoping(100, seed)),
        run_one("n-homomorphisms", || check_nhom_suite(50, seed)),
    ]
}
