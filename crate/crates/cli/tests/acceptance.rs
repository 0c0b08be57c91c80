//! Acceptance gate: one test per shipped guarantee, each ending with an
//! "ACCEPTANCE n: PASS" line. Oracles are implemented here from scratch
//! (point addition, invariant recomputation) so the checks stay independent
//! of the library's own arithmetic.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use eds_core::bound::{
    conductor_exponent_bound, conductor_exponent_cap, congruence_bound, enumerate_levels,
    format_ideal, level_recipe, ApEntry, EigenformData, IdealFactor,
};
use eds_core::curve::Point;
use eds_core::eds::{
    check_valuation_law, primitive_divisor_certificate, primitive_divisor_cofactor, CertConfig,
    Sequence,
};
use eds_core::frey::{
    build_frey, descent_triple, gcd_support_check, support_from_rational_primes,
    verify_prop_conclusions, ReductionClass,
};
use eds_core::input::{load_curve, CurveInput};
use eds_core::tower::{build_tower, Element, NumberField, Tower};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn load(name: &str) -> CurveInput {
    load_curve(&fixture(name)).unwrap()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------- criterion 1

/// Chord-and-tangent addition on the general Weierstrass model, written
/// directly over rationals with no shared code with the library.
fn oracle_add(
    a: &[BigInt; 5],
    p: &(BigRational, BigRational),
    q: &(BigRational, BigRational),
) -> (BigRational, BigRational) {
    let ar: Vec<BigRational> = a.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let (a1, a2, a3, a4, _a6) = (&ar[0], &ar[1], &ar[2], &ar[3], &ar[4]);
    let (x1, y1) = p;
    let (x2, y2) = q;
    let lambda = if x1 == x2 {
        assert_ne!(
            *y2,
            -y1 - a1 * x1 - a3,
            "oracle hit the point at infinity: base point is torsion"
        );
        (rat(3) * x1 * x1 + rat(2) * a2 * x1 + a4 - a1 * y1) / (rat(2) * y1 + a1 * x1 + a3)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = &lambda * &lambda + a1 * &lambda - a2 - x1 - x2;
    let y3 = &lambda * (x1 - &x3) - y1 - a1 * &x3 - a3;
    (x3, y3)
}

/// Splits x = A/B^2, y = C/B^3 with B > 0; the denominator of x must be a
/// perfect square and C must come out integral.
fn oracle_decompose(x: &BigRational, y: &BigRational) -> (BigInt, BigInt, BigInt) {
    let den = x.denom();
    let b = den.sqrt();
    assert_eq!(&(&b * &b), den, "x-denominator is not a perfect square");
    let c_rat = y * BigRational::from_integer(&b * &b * &b);
    assert!(c_rat.is_integer(), "y * B^3 is not integral");
    (x.numer().clone(), b, c_rat.to_integer())
}

#[test]
fn criterion_01_terms_match_independent_repeated_addition() {
    let start = Instant::now();
    let input = load("curve_37a.json");
    let seq = Sequence::compute(&input.curve, &input.point, 30).unwrap();
    let first_five: Vec<BigUint> = (1..=5).map(|n| seq.b(n)).collect();
    let expected: Vec<BigUint> = [1u32, 1, 1, 1, 2].iter().map(|&v| BigUint::from(v)).collect();
    assert_eq!(first_five, expected);

    let base = match &input.point {
        Point::Affine(x, y) => (x.clone(), y.clone()),
        Point::Infinity => panic!("base point must be affine"),
    };
    let mut acc = base.clone();
    for n in 1..=30u64 {
        let (oa, ob, oc) = oracle_decompose(&acc.0, &acc.1);
        let t = seq.term(n);
        assert_eq!((&t.a, &t.b, &t.c), (&oa, &ob, &oc), "mismatch at n = {n}");
        if n < 30 {
            acc = oracle_add(&input.curve.a, &acc, &base);
        }
    }
    assert!(
        start.elapsed() < Duration::from_secs(10),
        "sequence + oracle took {:?}",
        start.elapsed()
    );
    println!("ACCEPTANCE 1: PASS");
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_02_gcd_of_terms_is_term_of_gcd() {
    let bundle = ["curve_37a.json", "curve_quartic.json", "curve_a1odd.json"];
    let mut saw_odd_a1 = false;
    for name in bundle {
        let input = load(name);
        if (&input.curve.a[0] % BigInt::from(2)) != BigInt::from(0) {
            saw_odd_a1 = true;
        }
        let seq = Sequence::compute(&input.curve, &input.point, 40).unwrap();
        for m in 1..=40u64 {
            for n in 1..=40u64 {
                let lhs = num_integer::Integer::gcd(&seq.b(m), &seq.b(n));
                let rhs = seq.b(num_integer::gcd(m, n));
                assert_eq!(lhs, rhs, "{name}: gcd(B_{m}, B_{n}) != B_gcd");
            }
        }
    }
    assert!(saw_odd_a1, "bundle must include a curve with a1 odd");
    println!("ACCEPTANCE 2: PASS");
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_03_valuation_law_defects() {
    // check_valuation_law asserts exactness for odd primes always, and for
    // p = 2 when a1 is even; with a1 odd the two-adic excess is only recorded.
    for name in ["curve_37a.json", "curve_quartic_low.json"] {
        let input = load(name);
        assert_eq!(&input.curve.a[0] % BigInt::from(2), BigInt::from(0));
        let seq = Sequence::compute(&input.curve, &input.point, 60).unwrap();
        let rep = check_valuation_law(&seq, true).unwrap();
        assert!(rep.pairs_checked > 0, "{name}: no pairs exercised");
        assert_eq!(rep.max_two_defect, 0, "{name}: exact branch recorded a defect");
    }
    let input = load("curve_a1odd_low.json");
    assert_ne!(&input.curve.a[0] % BigInt::from(2), BigInt::from(0));
    let seq = Sequence::compute(&input.curve, &input.point, 60).unwrap();
    let rep = check_valuation_law(&seq, false).unwrap();
    assert!(rep.pairs_checked > 0);
    // Reported, never asserted: the observed two-adic excess on this curve.
    println!(
        "  odd-a1 branch: empirical two-adic excess up to {} over {} pairs",
        rep.max_two_defect, rep.pairs_checked
    );
    println!("ACCEPTANCE 3: PASS");
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn criterion_04_primitive_cofactor_without_factoring() {
    let start = Instant::now();
    for name in ["curve_quartic.json", "curve_a1odd.json"] {
        let input = load(name);
        let seq = Sequence::compute(&input.curve, &input.point, 40).unwrap();
        for n in 5..=40u64 {
            let cof = primitive_divisor_cofactor(&seq, n).unwrap();
            assert!(cof > BigUint::one(), "{name}: no primitive part at n = {n}");
        }
    }
    assert!(
        start.elapsed() < Duration::from_secs(60),
        "cofactor scan took {:?}",
        start.elapsed()
    );
    println!("ACCEPTANCE 4: PASS");
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn criterion_05_certificate_with_odd_q_and_zero_defect() {
    let input = load("curve_quartic.json");
    let excluded = vec![BigUint::from(2u32), BigUint::from(3u32)];
    let cert = primitive_divisor_certificate(
        &input.curve,
        &input.point,
        &excluded,
        &CertConfig::default(),
    )
    .unwrap();
    assert_ne!(&cert.q % BigUint::from(2u32), BigUint::zero(), "q must be odd");
    assert_eq!(cert.defect, 0);
    assert!(!excluded.contains(&cert.prime));
    // Witness divisibility re-verified by plain division on a fresh sequence.
    let seq = Sequence::compute(&input.curve, &input.point, cert.witness_index).unwrap();
    assert!(
        (seq.b(cert.witness_index) % &cert.prime).is_zero(),
        "claimed prime does not divide B_witness"
    );
    println!("ACCEPTANCE 5: PASS");
}

// ---------------------------------------------------------------- criterion 6

fn tower_for(input: &CurveInput) -> Tower {
    let (xs, ys) = input.curve.to_short_point(&input.point).unwrap();
    build_tower(&input.curve.short_model(), &xs, &ys).unwrap()
}

fn assert_square_identities(tower: &Tower, input: &CurveInput, seq: &Sequence, n: u64) -> [Element; 3] {
    let f = &tower.field;
    let trip = descent_triple(tower, &input.curve, seq, n).unwrap();
    let term = seq.term(n);
    let four_a = BigRational::from_integer(BigInt::from(4) * &term.a);
    let b_sq = BigRational::from_integer(&term.b * &term.b);
    for i in 0..3 {
        let lhs = f.mul(&trip.eps[i], &trip.eps[i]);
        let rhs = f.sub(
            &f.from_rational(&four_a),
            &f.mul(&tower.theta[i], &f.from_rational(&b_sq)),
        );
        assert_eq!(lhs, rhs, "eps_{}^2 != 4A_n - theta_i B_n^2 at n = {n}", i + 1);
    }
    trip.eps
}

#[test]
fn criterion_06_descent_square_roots_exact() {
    // Split cubic: the tower is trivial and the n = 1 triple is (82, 62, 98)
    // up to signs.
    let input = load("curve_quartic.json");
    let tower = tower_for(&input);
    assert_eq!(tower.field.degree(), 1);
    let seq = Sequence::compute(&input.curve, &input.point, 5).unwrap();
    let eps1 = assert_square_identities(&tower, &input, &seq, 1);
    let mut abs: Vec<BigRational> = eps1.iter().map(|e| e.coords[0].abs()).collect();
    abs.sort();
    assert_eq!(abs, vec![rat(62), rat(82), rat(98)]);
    for n in 2..=5 {
        assert_square_identities(&tower, &input, &seq, n);
    }

    // Irreducible cubic: the splitting field has degree 6 and the identities
    // stay exact.
    let input = load("curve_37a_doubled.json");
    let tower = tower_for(&input);
    assert!(tower.field.degree() >= 6, "tower degree {}", tower.field.degree());
    let seq = Sequence::compute(&input.curve, &input.point, 3).unwrap();
    for n in 1..=3 {
        assert_square_identities(&tower, &input, &seq, n);
    }
    println!("ACCEPTANCE 6: PASS");
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn criterion_07_pairwise_gcd_support() {
    let cases: [(&str, u64); 2] = [("curve_quartic.json", 5), ("curve_37a_doubled.json", 3)];
    for (name, max_n) in cases {
        let input = load(name);
        let tower = tower_for(&input);
        let seq = Sequence::compute(&input.curve, &input.point, max_n).unwrap();
        for n in 1..=max_n {
            let trip = descent_triple(&tower, &input.curve, &seq, n).unwrap();
            let rep = gcd_support_check(&tower, &input.curve, &trip).unwrap();
            assert!(
                rep.all_supported,
                "{name}: residual prime outside 2 disc(E) at n = {n}"
            );
            assert_eq!(rep.pairs.len(), 3);
            for pair in &rep.pairs {
                assert!(pair.residual.is_one());
            }
        }
    }
    println!("ACCEPTANCE 7: PASS");
}

// ---------------------------------------------------------------- criterion 8

/// Invariants of Y^2 = X(X - z1)(X + z2) = X^3 + (z2 - z1)X^2 - z1 z2 X,
/// recomputed here through the general Weierstrass b-invariants.
fn oracle_invariants(z1: &BigInt, z2: &BigInt) -> (BigInt, BigInt) {
    let a2 = z2 - z1;
    let a4 = -(z1 * z2);
    let b2 = BigInt::from(4) * &a2;
    let b4 = BigInt::from(2) * &a4;
    let b8 = -(&a4 * &a4);
    let delta = -(&b2 * &b2 * &b8) - BigInt::from(8) * &b4 * &b4 * &b4;
    let c4 = &b2 * &b2 - BigInt::from(24) * &b4;
    (delta, c4)
}

#[test]
fn criterion_08_frey_invariants_match_oracle() {
    let f = NumberField::rationals();
    let el = |v: &BigInt| f.from_rational(&BigRational::from_integer(v.clone()));
    let one = f.from_rational(&BigRational::one());

    // Deterministic xorshift64* stream; 100 nonzero integral triples.
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut next = move || {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        state = state.wrapping_mul(0x2545_F491_4F6C_DD1D);
        (state >> 33) as i64 % 120 - 60
    };
    let mut made = 0u32;
    while made < 100 {
        let (r1, r2) = (next(), next());
        if r1 == 0 || r2 == 0 || r1 + r2 == 0 {
            continue;
        }
        let (z1, z2) = (BigInt::from(r1), BigInt::from(r2));
        let z3 = -(&z1 + &z2);
        let frey = build_frey(&f, &[el(&z1), el(&z2), el(&z3)], one.clone()).unwrap();
        let (delta, c4) = oracle_invariants(&z1, &z2);
        assert_eq!(frey.delta_f.coords[0], BigRational::from_integer(delta));
        assert_eq!(frey.c4_f.coords[0], BigRational::from_integer(c4));
        made += 1;
    }

    let frey = build_frey(
        &f,
        &[el(&BigInt::one()), el(&BigInt::one()), el(&BigInt::from(-2))],
        one,
    )
    .unwrap();
    assert_eq!(frey.delta_f.coords[0], rat(64));
    println!("ACCEPTANCE 8: PASS");
}

// ---------------------------------------------------------------- criterion 9

#[test]
fn criterion_09_synthetic_power_instance_verifies() {
    let f = NumberField::rationals();
    let el = |v: BigInt| f.from_rational(&BigRational::from_integer(v));
    let one = f.from_rational(&BigRational::one());
    let ell = 7u32;
    let z1 = BigInt::from(3) * BigInt::from(11).pow(ell);
    let z2 = BigInt::from(5).pow(ell);
    let z3 = -(&z1 + &z2);
    // |z3| = 58539638 = 2 * 103 * 284173; the support carries every prime of
    // z1 z2 z3 except the designated 11.
    let support_primes: Vec<BigUint> = [2u64, 3, 5, 103, 284_173]
        .iter()
        .map(|&p| BigUint::from(p))
        .collect();
    let support = support_from_rational_primes(&f, &support_primes, &BigUint::from(11u32)).unwrap();
    let frey = build_frey(&f, &[el(z1), el(z2), el(z3)], one).unwrap();
    let rep = verify_prop_conclusions(&f, &frey, &support, Some(7), 10_000).unwrap();
    rep.ensure_ok().unwrap();

    // The distinguished ideal is multiplicative with exponent divisible by 7.
    let first = &rep.rows[0];
    assert_eq!(first.label, "11.0");
    assert_eq!(first.class, ReductionClass::Multiplicative);
    assert_eq!(first.ell_divides, Some(true));
    // Every other scanned prime has good reduction.
    assert!(rep
        .rows
        .iter()
        .skip(1)
        .all(|r| r.class == ReductionClass::Good));
    // The rational-norm certificate covers all primes at once.
    assert_eq!(rep.power_certificate.len(), 3);
    assert!(rep.power_certificate.iter().all(|p| p.is_power));
    println!("ACCEPTANCE 9: PASS");
}

// --------------------------------------------------------------- criterion 10

fn fac(label: &str, exp: u64) -> IdealFactor {
    IdealFactor {
        label: label.into(),
        exp,
    }
}

#[test]
fn criterion_10_bound_arithmetic_matches_derived_values() {
    // Level recipe: an exponent-1 prime moves to the removable part exactly
    // when ell divides its discriminant valuation.
    let conductor = [fac("q1", 1), fac("q2", 2)];
    let recipe = level_recipe(&conductor, &[("q1".to_string(), 7)], 7).unwrap();
    assert_eq!(recipe.m_part, vec![fac("q1", 1)]);
    assert_eq!(recipe.n_part, vec![fac("q2", 2)]);
    let recipe = level_recipe(&conductor, &[("q1".to_string(), 5)], 7).unwrap();
    assert!(recipe.m_part.is_empty());
    assert_eq!(recipe.n_part, conductor.to_vec());

    // Conductor exponents: 2 away from 6, and the degree cap at 24.
    let f = NumberField::rationals();
    let q5 = f.split_prime(&BigUint::from(5u32)).unwrap().remove(0);
    assert_eq!(conductor_exponent_bound(&f, &q5).unwrap(), 2);
    assert_eq!(conductor_exponent_cap(24), 146);

    // Level enumeration: bounds (8, 2) over {2, 5} give 9 * 3 candidates.
    let support = support_from_rational_primes(
        &f,
        &[BigUint::from(2u32), BigUint::from(5u32)],
        &BigUint::from(3u32),
    )
    .unwrap();
    let levels = enumerate_levels(&f, &support, 100_000).unwrap();
    assert_eq!(levels.len(), 27);
    assert_eq!(format_ideal(&levels[0]), "(1)");

    // Congruence bounds: N = 5 with a = 2 gives norms (4, 8) and primes {2};
    // the quadratic field x^2 - 2 with a the generator gives 34 twice.
    let form = EigenformData {
        label: "r5".into(),
        hecke: vec![BigInt::zero(), BigInt::one()],
        level: vec![fac("2.0", 1)],
        ap: vec![ApEntry {
            prime_label: "p.0".into(),
            norm: BigUint::from(5u32),
            coords: vec![rat(2)],
        }],
    };
    let cb = congruence_bound(&BigUint::from(5u32), &form, "p.0", 1000).unwrap();
    assert_eq!(cb.norms, [BigInt::from(4), BigInt::from(8)]);
    assert_eq!(cb.primes, vec![BigUint::from(2u32)]);
    assert!(cb.residual.is_none());

    let form = EigenformData {
        label: "rt2".into(),
        hecke: vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
        level: vec![],
        ap: vec![ApEntry {
            prime_label: "p.0".into(),
            norm: BigUint::from(5u32),
            coords: vec![BigRational::zero(), BigRational::one()],
        }],
    };
    let cb = congruence_bound(&BigUint::from(5u32), &form, "p.0", 1000).unwrap();
    assert_eq!(cb.norms, [BigInt::from(34), BigInt::from(34)]);
    assert_eq!(cb.primes, vec![BigUint::from(2u32), BigUint::from(17u32)]);
    println!("ACCEPTANCE 10: PASS");
}

// --------------------------------------------------------------- criterion 11

fn run_cli_suite(cache_root: &Path) -> String {
    let bin = env!("CARGO_BIN_EXE_eds");
    let c37 = fixture("curve_37a.json");
    let quartic = fixture("curve_quartic.json");
    let forms = fixture("forms_quartic");
    let cache = cache_root.join("terms");
    std::fs::create_dir_all(&cache).unwrap();
    let cache_s = cache.to_str().unwrap().to_string();
    let c37_s = c37.to_str().unwrap();
    let quartic_s = quartic.to_str().unwrap();
    let forms_s = forms.to_str().unwrap();

    let suite: Vec<Vec<&str>> = vec![
        vec!["gen", "--curve", c37_s, "--max-index", "30", "--json", "--cache-dir", &cache_s],
        vec!["props", "--curve", c37_s, "--max-index", "30", "--json", "--cache-dir", &cache_s],
        vec!["powers", "--curve", c37_s, "--max-index", "30", "--json", "--cache-dir", &cache_s],
        vec!["primdiv", "--curve", quartic_s, "--max-index", "20", "--json"],
        vec![
            "frey", "build", "--curve", quartic_s, "-n", "1", "--ell", "2", "--norm-bound",
            "1000", "--json",
        ],
        vec![
            "bound", "exponent", "--curve", quartic_s, "--forms", forms_s,
            "--assume-modularity", "--json",
        ],
    ];
    let mut out = String::new();
    for args in suite {
        let result = Command::new(bin).args(&args).output().unwrap();
        assert!(
            result.status.success(),
            "command {:?} failed: {}",
            args,
            String::from_utf8_lossy(&result.stderr)
        );
        out.push_str(&String::from_utf8(result.stdout).unwrap());
        out.push('\n');
    }
    out
}

/// Everything except the wall-clock stamp must be byte-identical.
fn strip_timestamps(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("\"timestamp\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn criterion_11_cold_runs_are_deterministic() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    let run1 = run_cli_suite(dir1.path());
    let run2 = run_cli_suite(dir2.path());
    let s1 = strip_timestamps(&run1);
    let s2 = strip_timestamps(&run2);
    assert!(!s1.is_empty());
    assert_eq!(s1, s2, "certificates differ between cold runs");
    println!("ACCEPTANCE 11: PASS");
}
