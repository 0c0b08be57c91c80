//! Divisibility sequences attached to a rational point: term computation
//! (nP = (A_n/B_n^2, C_n/B_n^3)), structural checks (strong divisibility and
//! the prime-valuation growth law), certificates pinning a prime divisor to a
//! witness index, and scans for perfect-power denominators.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{coprime_part, factor_with_budget, is_probable_prime, perfect_power, valuation};
use crate::curve::{decompose, Curve, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Term {
    pub n: u64,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Term {
    pub fn point(&self) -> Point {
        use num_rational::BigRational;
        let b2 = &self.b * &self.b;
        let b3 = &b2 * &self.b;
        Point::Affine(
            BigRational::new(self.a.clone(), b2),
            BigRational::new(self.c.clone(), b3),
        )
    }
}

#[derive(Debug, Clone)]
pub struct Sequence {
    pub terms: Vec<Term>, // terms[i] is index n = i + 1
}

impl Sequence {
    /// Computes nP for n = 1..=max_n by repeated addition. A point of finite
    /// order reaches infinity and is rejected: the denominator sequence is
    /// not defined there.
    pub fn compute(curve: &Curve, base: &Point, max_n: u64) -> Result<Sequence> {
        curve.require_on_curve(base)?;
        if base.is_infinity() {
            return Err(Error::TorsionPoint("0".into()));
        }
        if max_n == 0 {
            return Ok(Sequence { terms: Vec::new() });
        }
        let (a, b, c) = decompose(base)?;
        let mut terms = vec![Term { n: 1, a, b, c }];
        if max_n >= 2 {
            let two = curve.add(base, base);
            if two.is_infinity() {
                return Err(Error::TorsionPoint("2".into()));
            }
            let (a, b, c) = decompose(&two)?;
            terms.push(Term { n: 2, a, b, c });
        }
        for n in 3..=max_n {
            let next = chord_step(curve, &terms[0], terms.last().unwrap(), n)?;
            terms.push(next);
        }
        verify_term(curve, terms.last().unwrap())?;
        Ok(Sequence { terms })
    }

    /// Resumes from existing leading terms (e.g. read back from a cache),
    /// extending to max_n. The supplied terms must start at n = 1 and be
    /// contiguous.
    pub fn extend(curve: &Curve, base: &Point, mut terms: Vec<Term>, max_n: u64) -> Result<Sequence> {
        for (i, t) in terms.iter().enumerate() {
            if t.n != i as u64 + 1 {
                return Err(Error::CacheCorrupt(format!(
                    "terms not contiguous at position {i}"
                )));
            }
        }
        if terms.len() < 2 {
            return Sequence::compute(curve, base, max_n);
        }
        curve.require_on_curve(base)?;
        let (a, b, c) = decompose(base)?;
        let first = &terms[0];
        if first.a != a || first.b != b || first.c != c {
            return Err(Error::CacheCorrupt(
                "cached first term does not match the supplied base point".into(),
            ));
        }
        verify_term(curve, terms.last().unwrap())
            .map_err(|_| Error::CacheCorrupt("cached term is not a point on the curve".into()))?;
        for n in terms.len() as u64 + 1..=max_n {
            let next = chord_step(curve, &terms[0], terms.last().unwrap(), n)?;
            terms.push(next);
        }
        if max_n > 2 {
            verify_term(curve, &terms[max_n as usize - 1])?;
        }
        terms.truncate(max_n as usize);
        Ok(Sequence { terms })
    }

    pub fn max_index(&self) -> u64 {
        self.terms.len() as u64
    }

    pub fn term(&self, n: u64) -> &Term {
        assert!(n >= 1 && n <= self.max_index(), "index {n} out of range");
        &self.terms[(n - 1) as usize]
    }

    pub fn b(&self, n: u64) -> BigUint {
        self.term(n).b.magnitude().clone()
    }
}

/// One chord addition (new_n)P = cur + base in integer coordinates. The known
/// denominator shape (B^2, B^3) lets the step run on integers with a single
/// gcd: the unreduced sum has denominator D^2 for D = B_n * e * G, the reduced
/// B falls out of gcd + exact square root, and the y-coordinate reduces by an
/// exact cube division.
fn chord_step(curve: &Curve, base: &Term, cur: &Term, new_n: u64) -> Result<Term> {
    let [a1, a2, a3, ..] = &curve.a;
    let (e, av, cv) = (&base.b, &base.a, &base.c);
    let (bn, an, cn) = (&cur.b, &cur.a, &cur.c);
    let e2 = e * e;
    let e3 = &e2 * e;
    let bn2 = bn * bn;
    let bn3 = &bn2 * bn;
    let g = an * &e2 - av * &bn2;
    if g.is_zero() {
        // Same x-coordinate; reduced coordinates are unique, so cur = ±base.
        if *cn == -(cv + a1 * (av * e) + a3 * &e3) {
            return Err(Error::TorsionPoint(new_n.to_string()));
        }
        // cur = base (a doubling): fall back to the general group law.
        let sum = curve.add(&cur.point(), &base.point());
        if sum.is_infinity() {
            return Err(Error::TorsionPoint(new_n.to_string()));
        }
        let (a, b, c) = decompose(&sum)?;
        return Ok(Term { n: new_n, a, b, c });
    }
    let n_slope = cn * &e3 - cv * &bn3;
    let d = bn * e * &g;
    let d2 = &d * &d;
    let d3 = &d2 * &d;
    let g2 = &g * &g;
    let x_num = &n_slope * &n_slope + a1 * (&n_slope * &d)
        - a2 * &d2
        - &g2 * (av * &bn2 + an * &e2);
    let y_num = -((&n_slope + a1 * &d) * &x_num)
        - (cv * (an * bn) - cn * (av * e)) * (&bn2 * &e2 * &g2)
        - a3 * &d3;
    let red = x_num.gcd(&d2);
    let den = &d2 / &red;
    let b_new = crate::arith::exact_sqrt(den.magnitude()).ok_or_else(|| {
        Error::Verification(format!(
            "denominator of x({new_n}P) is not a perfect square"
        ))
    })?;
    let b_new = BigInt::from(b_new);
    let a_new = &x_num / &red;
    let d1 = &d / &b_new;
    let d13 = &d1 * &d1 * &d1;
    let (c_new, rem) = y_num.div_rem(&d13);
    if !rem.is_zero() {
        return Err(Error::Verification(format!(
            "denominator of y({new_n}P) is not the cube of the x-denominator"
        )));
    }
    Ok(Term {
        n: new_n,
        a: a_new,
        b: b_new,
        c: c_new,
    })
}

/// Checks the cleared Weierstrass equation on an integer triple:
/// C^2 + a1*A*C*B + a3*C*B^3 = A^3 + a2*A^2*B^2 + a4*A*B^4 + a6*B^6.
fn verify_term(curve: &Curve, t: &Term) -> Result<()> {
    let [a1, a2, a3, a4, a6] = &curve.a;
    let b2 = &t.b * &t.b;
    let b4 = &b2 * &b2;
    let b6 = &b4 * &b2;
    let lhs = &t.c * &t.c + a1 * (&t.a * &t.c * &t.b) + a3 * (&t.c * &b2 * &t.b);
    let rhs = &t.a * &t.a * &t.a + a2 * (&t.a * &t.a * &b2) + a4 * (&t.a * &b4) + a6 * &b6;
    if lhs != rhs {
        return Err(Error::Verification(format!(
            "term {} does not satisfy the curve equation",
            t.n
        )));
    }
    Ok(())
}

/// gcd(B_m, B_n) = B_gcd(m, n) over every pair in range.
pub fn check_strong_divisibility(seq: &Sequence) -> Result<()> {
    let top = seq.max_index();
    for m in 1..=top {
        for n in m + 1..=top {
            let g = seq.b(m).gcd(&seq.b(n));
            let expected = seq.b(m.gcd(&n));
            if g != expected {
                return Err(Error::Verification(format!(
                    "gcd(B_{m}, B_{n}) = {g}, expected B_{} = {expected}",
                    m.gcd(&n)
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct ValuationReport {
    pub pairs_checked: u64,
    /// Largest excess of v_2(B_nm) over v_2(B_n) + v_2(m) seen at pairs where
    /// exactness is not guaranteed (a1 odd). Zero elsewhere.
    pub max_two_defect: u64,
    /// Pairs where the two-part was checked for exact equality.
    pub two_exact_pairs: u64,
}

fn odd_part(x: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    let mut v = x.clone();
    while (&v % &two).is_zero() {
        v /= &two;
    }
    v
}

/// Checks v_p(B_{nm}) = v_p(B_n) + v_p(m) for every prime p dividing B_n,
/// simultaneously and without factoring: the part of B_{nm} supported on the
/// primes of B_n must equal B_n times the part of m supported on those
/// primes. At p = 2 the law is exact only when a1 is even; otherwise the
/// check tolerates a bounded excess and records it.
pub fn check_valuation_law(seq: &Sequence, a1_even: bool) -> Result<ValuationReport> {

    let top = seq.max_index();
    let mut report = ValuationReport::default();
    let two = BigUint::from(2u32);
    for n in 1..=top {
        let bn = seq.b(n);
        if bn.is_one() {
            continue;
        }
        for m in 2..=top / n {
            let bnm = seq.b(n * m);
            let mu = BigUint::from(m);
            let x = &bnm / coprime_part(&bnm, &bn);
            let y = &mu / coprime_part(&mu, &bn);
            if odd_part(&x) != odd_part(&bn) * odd_part(&y) {
                return Err(Error::Verification(format!(
                    "odd-prime valuation law fails at n = {n}, m = {m}"
                )));
            }
            if (&bn % &two).is_zero() {
                let vx = valuation(&x, &two);
                let vexp = valuation(&bn, &two) + valuation(&mu, &two);
                if a1_even {
                    if vx != vexp {
                        return Err(Error::Verification(format!(
                            "two-adic valuation law fails at n = {n}, m = {m}: v = {vx}, expected {vexp}"
                        )));
                    }
                    report.two_exact_pairs += 1;
                } else {
                    if vx < vexp {
                        return Err(Error::Verification(format!(
                            "two-adic valuation dropped at n = {n}, m = {m}"
                        )));
                    }
                    report.max_two_defect = report.max_two_defect.max(vx - vexp);
                }
            }
            report.pairs_checked += 1;
        }
    }
    Ok(report)
}

/// A certificate that every denominator in the sequence that is a perfect
/// ell-th power with ell > kappa is divisible by `prime`.
///
/// Construction: pick q dividing B_1 (odd preferred), take the least e with
/// q^e strictly beyond `silverman_start`, set the witness index to q^e, read
/// kappa off as v_q(B_witness), and extract a prime of B_witness outside the
/// excluded set. For odd q the growth law forces kappa = v_q(B_1) + e; the
/// `defect` field records the two-adic excess otherwise (observed on the
/// doubling chain, which is the only case the law does not pin down).
#[derive(Debug, Clone)]
pub struct PrimitiveDivisorCert {
    pub q: BigUint,
    pub v_q_b1: u64,
    pub e: u64,
    pub witness_index: u64,
    pub kappa: u64,
    pub defect: u64,
    pub prime: BigUint,
    pub excluded: Vec<BigUint>,
}

pub struct CertConfig {
    pub silverman_start: u64,
    pub factor_bound: u64,
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig {
            silverman_start: 2,
            factor_bound: 1_000_000,
        }
    }
}

/// The precondition shared by every certificate-backed pipeline: some prime
/// must divide B_1. Cheap to probe (one term), so callers can fail fast
/// before committing to tower or class-group work.
pub fn require_prime_in_b1(curve: &Curve, base: &Point) -> Result<()> {
    let head = Sequence::compute(curve, base, 1)?;
    if head.b(1).is_one() {
        return Err(Error::Precondition(
            "B_1 = 1: certificate construction needs a prime dividing B_1".into(),
        ));
    }
    Ok(())
}

/// `excluded` is the caller's set of primes the certified prime must avoid;
/// the certificate fails if B_witness has no prime factor outside it.
pub fn primitive_divisor_certificate(
    curve: &Curve,
    base: &Point,
    excluded: &[BigUint],
    cfg: &CertConfig,
) -> Result<PrimitiveDivisorCert> {
    require_prime_in_b1(curve, base)?;
    let head = Sequence::compute(curve, base, 1)?;
    let b1 = head.b(1);
    let b1_factors = factor_with_budget(&b1, cfg.factor_bound)?;
    let q = b1_factors
        .iter()
        .map(|(p, _)| p)
        .find(|p| **p != BigUint::from(2u32))
        .cloned()
        .unwrap_or_else(|| BigUint::from(2u32));
    let v1 = valuation(&b1, &q);
    let mut e = 1u64;
    let mut w = q.clone();
    while w <= BigUint::from(cfg.silverman_start) {
        w *= &q;
        e += 1;
    }
    let witness_index: u64 = w
        .to_string()
        .parse()
        .map_err(|_| Error::Budget(format!("witness index {w} is out of range")))?;
    let seq = Sequence::compute(curve, base, witness_index)?;
    let bw = seq.b(witness_index);
    let kappa = valuation(&bw, &q);
    let a1_even = curve.a[0].is_even();
    let exact = v1 + e;
    if kappa < exact || ((q != BigUint::from(2u32) || a1_even) && kappa != exact) {
        return Err(Error::Verification(format!(
            "valuation growth law violated: v_q(B_{witness_index}) = {kappa}, expected {exact}"
        )));
    }
    let defect = kappa - exact;
    let mut stripped = bw.clone();
    for t in excluded {
        stripped = coprime_part(&stripped, t);
    }
    if stripped.is_one() {
        return Err(Error::Verification(format!(
            "every prime of B_{witness_index} lies in the excluded set"
        )));
    }
    let prime = smallest_prime_factor(&stripped, cfg.factor_bound)?;
    Ok(PrimitiveDivisorCert {
        q,
        v_q_b1: v1,
        e,
        witness_index,
        kappa,
        defect,
        prime,
        excluded: excluded.to_vec(),
    })
}

fn smallest_prime_factor(n: &BigUint, bound: u64) -> Result<BigUint> {
    debug_assert!(!n.is_one());
    let (factors, cofactor) = crate::arith::trial_division(n, bound);
    if let Some((p, _)) = factors.first() {
        return Ok(p.clone());
    }
    if is_probable_prime(&cofactor) {
        return Ok(cofactor);
    }
    Err(Error::Budget(format!(
        "could not isolate a prime factor of {n} within trial bound {bound}"
    )))
}

/// Verifies the either-or consequence of a certificate over computed terms:
/// every B_n that is a perfect ell-th power with ell > kappa must be
/// divisible by the certified prime.
pub fn verify_certificate_consequence(seq: &Sequence, cert: &PrimitiveDivisorCert) -> Result<u64> {

    let mut checked = 0;
    for t in &seq.terms {
        let b = t.b.magnitude();
        if b.is_one() {
            continue;
        }
        let (_, k) = perfect_power(b);
        if k > cert.kappa && !(b % &cert.prime).is_zero() {
            return Err(Error::Verification(format!(
                "B_{} is a perfect {k}-th power avoiding the certified prime {}",
                t.n, cert.prime
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Largest divisor of B_n coprime to every earlier term B_d with d a proper
/// divisor of n, computed by gcd-stripping alone (no factorization). A value
/// above 1 witnesses a prime dividing B_n and no B_d below it; by strong
/// divisibility such a prime divides no B_m with m < n at all.
pub fn primitive_divisor_cofactor(seq: &Sequence, n: u64) -> Result<BigUint> {
    let bn = seq.b(n);
    let mut out = bn;
    for d in 1..n {
        if n.is_multiple_of(d) {
            out = coprime_part(&out, &seq.b(d));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerHit {
    pub n: u64,
    pub base: BigUint,
    pub exponent: u64,
}

/// All ways to write a term as a perfect prime power: (n, u, ell) with
/// B_n = u^ell, u > 1 and ell a prime >= min_exponent. A term whose maximal
/// power exponent is k yields one hit per prime divisor of k.
pub fn find_power_terms(seq: &Sequence, min_exponent: u64) -> Vec<PowerHit> {
    let floor = min_exponent.max(2);
    let mut out = Vec::new();
    for t in &seq.terms {
        let b = t.b.magnitude();
        if b.is_one() {
            continue;
        }
        let (base, k) = perfect_power(b);
        if k < 2 {
            continue;
        }
        let mut rest = k;
        let mut d = 2u64;
        while d * d <= rest {
            if rest % d == 0 {
                while rest % d == 0 {
                    rest /= d;
                }
                if d >= floor {
                    out.push(PowerHit {
                        n: t.n,
                        base: pow_biguint(&base, k / d),
                        exponent: d,
                    });
                }
            }
            d += 1;
        }
        if rest > 1 && rest >= floor {
            out.push(PowerHit {
                n: t.n,
                base: pow_biguint(&base, k / rest),
                exponent: rest,
            });
        }
    }
    out
}

fn pow_biguint(b: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..k {
        acc *= b;
    }
    acc
}
