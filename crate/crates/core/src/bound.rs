//! Exponent-bound assembly: the level recipe, per-prime conductor exponent
//! bounds, enumeration of candidate levels over the support, congruence
//! bounds extracted from ingested eigenform data, and the final report that
//! dominates every admissible exponent.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{is_probable_prime, trial_division};
use crate::eds::PrimitiveDivisorCert;
use crate::error::{Error, Result};
use crate::frey::SupportSets;
use crate::poly::{resultant_q, QPoly, Sturm};
use crate::tower::{Element, NumberField, PrimeIdeal};

/// One prime-ideal factor of an ideal, by label, with its exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFactor {
    pub label: String,
    pub exp: u64,
}

/// "(1)" for the unit ideal, otherwise factors joined by "*".
pub fn format_ideal(factors: &[IdealFactor]) -> String {
    if factors.is_empty() {
        return "(1)".into();
    }
    factors
        .iter()
        .map(|f| {
            if f.exp == 1 {
                f.label.clone()
            } else {
                format!("{}^{}", f.label, f.exp)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn normalized(level: &[IdealFactor]) -> Vec<(String, u64)> {
    let mut m: BTreeMap<String, u64> = BTreeMap::new();
    for f in level {
        *m.entry(f.label.clone()).or_insert(0) += f.exp;
    }
    m.into_iter().filter(|(_, e)| *e > 0).collect()
}

#[derive(Debug, Clone)]
pub struct BoundConfig {
    /// Ingested irreducibility constant; effectiveness is the data source's
    /// burden, this crate only requires it to be >= 1.
    pub c_l: BigUint,
    /// With modularity assumed the non-modular j-invariant set is empty and
    /// kappa_1 = 0; otherwise kappa_1 must be supplied.
    pub assume_modularity: bool,
    pub kappa1: Option<u64>,
    /// Discriminant multiple of the tower field (an overestimate only raises
    /// the bound, which stays valid).
    pub disc_l_multiple: BigInt,
    /// Guard against combinatorial explosion in level enumeration.
    pub max_levels: u64,
    /// Trial-division budget for congruence norms.
    pub factor_bound: u64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            c_l: BigUint::one(),
            assume_modularity: true,
            kappa1: None,
            disc_l_multiple: BigInt::one(),
            max_levels: 100_000,
            factor_bound: 1_000_000,
        }
    }
}

/// One Hecke eigenvalue: the ideal it belongs to, that ideal's norm, and the
/// eigenvalue's coordinates over the power basis of the Hecke field.
#[derive(Debug, Clone)]
pub struct ApEntry {
    pub prime_label: String,
    pub norm: BigUint,
    pub coords: Vec<BigRational>,
}

/// Eigenform data is ingested, never computed: a label, the level as ideal
/// factors, the defining polynomial of the Hecke field, and an eigenvalue
/// table.
#[derive(Debug, Clone)]
pub struct EigenformData {
    pub label: String,
    pub hecke: Vec<BigInt>,
    pub level: Vec<IdealFactor>,
    pub ap: Vec<ApEntry>,
}

impl EigenformData {
    pub fn hecke_field(&self) -> Result<NumberField> {
        NumberField::from_integral_poly(&self.hecke)
    }

    fn eigenvalue(&self, f: &NumberField, entry: &ApEntry) -> Result<Element> {
        if entry.coords.len() > f.degree() {
            return Err(Error::InvalidInput(format!(
                "eigenvalue at {} has more coordinates than the Hecke degree",
                entry.prime_label
            )));
        }
        let mut coords = entry.coords.clone();
        coords.resize(f.degree(), BigRational::zero());
        f.from_coords(coords)
    }

    /// Structural checks plus the asserted bound |a| <= 2 sqrt(N) at every
    /// table entry — checked exactly, not assumed.
    pub fn validate(&self) -> Result<()> {
        let f = self.hecke_field()?;
        for lf in &self.level {
            if lf.exp == 0 {
                return Err(Error::InvalidInput(format!(
                    "form {}: level exponent 0 at {}",
                    self.label, lf.label
                )));
            }
        }
        for entry in &self.ap {
            if entry.norm < BigUint::from(2u32) {
                return Err(Error::InvalidInput(format!(
                    "form {}: ideal norm {} below 2",
                    self.label, entry.norm
                )));
            }
            let a = self.eigenvalue(&f, entry)?;
            if !embeddings_within_twice_sqrt(&f, &a, &entry.norm) {
                return Err(Error::Verification(format!(
                    "form {}: eigenvalue at {} violates |a| <= 2*sqrt(N)",
                    self.label, entry.prime_label
                )));
            }
        }
        Ok(())
    }
}

/// Every embedding of `a` has absolute value <= 2 sqrt(n) exactly when the
/// characteristic polynomial of 4n - a^2 has no negative root; Sturm chains
/// decide that without any floating point.
fn embeddings_within_twice_sqrt(f: &NumberField, a: &Element, n: &BigUint) -> bool {
    let four_n = BigRational::from_integer(BigInt::from(4) * BigInt::from(n.clone()));
    let elt = f.sub(&f.from_rational(&four_n), &f.square(a));
    let cp = f.char_poly(&elt);
    let zero = BigRational::zero();
    let st = Sturm::new(&cp);
    let at_most_zero = st.real_root_count() - st.roots_above(&zero);
    let zero_is_root = cp.eval(&zero).is_zero();
    at_most_zero == usize::from(zero_is_root)
}

#[derive(Debug, Clone)]
pub struct LevelRecipe {
    pub conductor: Vec<IdealFactor>,
    pub m_part: Vec<IdealFactor>,
    pub n_part: Vec<IdealFactor>,
}

/// Splits the conductor as M * N where M collects exactly the primes that
/// divide it to the first power and whose discriminant valuation is
/// divisible by ell; those are the primes the level-lowering step removes.
pub fn level_recipe(
    conductor: &[IdealFactor],
    delta_vals: &[(String, i64)],
    ell: u64,
) -> Result<LevelRecipe> {
    if ell < 2 {
        return Err(Error::InvalidInput("ell must be a prime >= 2".into()));
    }
    let mut m_part = Vec::new();
    let mut n_part = Vec::new();
    for f in conductor {
        if f.exp == 0 {
            return Err(Error::Precondition(format!(
                "conductor exponent 0 at {}",
                f.label
            )));
        }
        if f.exp == 1 {
            let v = delta_vals
                .iter()
                .find(|(l, _)| *l == f.label)
                .map(|(_, v)| *v)
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "no discriminant valuation supplied for {}",
                        f.label
                    ))
                })?;
            if v.rem_euclid(ell as i64) == 0 {
                m_part.push(f.clone());
                continue;
            }
        }
        n_part.push(f.clone());
    }
    Ok(LevelRecipe {
        conductor: conductor.to_vec(),
        m_part,
        n_part,
    })
}

/// 2 + 6 [L:Q], the degree-level cap on any conductor exponent.
pub fn conductor_exponent_cap(degree: usize) -> u64 {
    2 + 6 * degree as u64
}

/// 2 + 3 v_q(3) + 6 v_q(2) for the given prime ideal, capped at the degree
/// bound. The valuations come from the field itself, not from assumptions
/// about ramification.
pub fn conductor_exponent_bound(field: &NumberField, q: &PrimeIdeal) -> Result<u64> {
    let two = field.from_rational(&BigRational::from_integer(BigInt::from(2)));
    let three = field.from_rational(&BigRational::from_integer(BigInt::from(3)));
    let v2 = field.valuation_at(q, &two)?;
    let v3 = field.valuation_at(q, &three)?;
    debug_assert!(v2 >= 0 && v3 >= 0);
    let raw = 2 + 3 * v3 as u64 + 6 * v2 as u64;
    Ok(raw.min(conductor_exponent_cap(field.degree())))
}

/// All ideals supported on the support set with per-prime exponent at most
/// the conductor bound, as exponent vectors; the first entry is the unit
/// ideal. The count is exactly prod(bound_i + 1) and is guarded.
pub fn enumerate_levels(
    field: &NumberField,
    support: &SupportSets,
    max_count: u64,
) -> Result<Vec<Vec<IdealFactor>>> {
    if !support.unsafe_rational.is_empty() {
        return Err(Error::Precondition(format!(
            "support contains primes {:?} whose ideals cannot be presented; \
             levels over them cannot be enumerated",
            support.unsafe_rational
        )));
    }
    let mut bounds = Vec::with_capacity(support.ideals.len());
    let mut count: u128 = 1;
    for ideal in &support.ideals {
        let b = conductor_exponent_bound(field, ideal)?;
        count = count.saturating_mul(b as u128 + 1);
        if count > max_count as u128 {
            return Err(Error::Budget(format!(
                "level enumeration exceeds the guard of {max_count}"
            )));
        }
        bounds.push(b);
    }
    let mut levels = Vec::with_capacity(count as usize);
    let k = bounds.len();
    let mut exps = vec![0u64; k];
    loop {
        levels.push(
            exps.iter()
                .zip(&support.ideals)
                .filter(|(e, _)| **e > 0)
                .map(|(e, ideal)| IdealFactor {
                    label: ideal.label.clone(),
                    exp: *e,
                })
                .collect(),
        );
        let mut i = 0;
        loop {
            if i == k {
                debug_assert_eq!(levels.len() as u128, count);
                return Ok(levels);
            }
            exps[i] += 1;
            if exps[i] <= bounds[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct CongruenceBound {
    /// Norm((N+1) - a) and Norm((N+1) + a), both nonzero.
    pub norms: [BigInt; 2],
    /// Certified prime divisors of the norm product.
    pub primes: Vec<BigUint>,
    /// Unfactored composite cofactor, an explicit residual bound when the
    /// trial-division budget did not finish the job.
    pub residual: Option<BigUint>,
}

/// Any congruence with the eigenform at the given ideal forces the exponent
/// to divide Norm((N+1) - a) * Norm((N+1) + a). The norms are computed as
/// resultants with the Hecke polynomial and cross-checked against the
/// multiplication-matrix determinant; a vanishing norm means the data broke
/// the Ramanujan bound.
pub fn congruence_bound(
    n_p: &BigUint,
    form: &EigenformData,
    p_label: &str,
    factor_bound: u64,
) -> Result<CongruenceBound> {
    let entry = form
        .ap
        .iter()
        .find(|e| e.prime_label == p_label)
        .ok_or_else(|| {
            Error::Precondition(format!(
                "form {} has no eigenvalue at {}",
                form.label, p_label
            ))
        })?;
    if entry.norm != *n_p {
        return Err(Error::InvalidInput(format!(
            "norm mismatch at {}: table says {}, caller says {}",
            p_label, entry.norm, n_p
        )));
    }
    let f = form.hecke_field()?;
    let a = form.eigenvalue(&f, entry)?;
    let np1 = f.from_rational(&BigRational::from_integer(
        BigInt::from(n_p.clone()) + BigInt::one(),
    ));
    let mut norms = Vec::with_capacity(2);
    for e in [f.sub(&np1, &a), f.add(&np1, &a)] {
        let res = resultant_q(f.min_poly(), &QPoly::new(e.coords.clone()));
        let nrm = f.norm(&e);
        if res != nrm {
            return Err(Error::Verification(
                "resultant norm and matrix norm disagree".into(),
            ));
        }
        if nrm.is_zero() {
            return Err(Error::Verification(format!(
                "Norm((N+1) -/+ a) vanished at {}: the eigenvalue violates the \
                 Ramanujan bound",
                p_label
            )));
        }
        if !nrm.denom().is_one() {
            return Err(Error::InvalidInput(format!(
                "eigenvalue at {} has non-integral norm {}",
                p_label, nrm
            )));
        }
        norms.push(nrm.numer().clone());
    }
    let product = norms[0].magnitude() * norms[1].magnitude();
    let (factors, cofactor) = trial_division(&product, factor_bound);
    let mut primes: Vec<BigUint> = factors.into_iter().map(|(p, _)| p).collect();
    let mut residual = None;
    if !cofactor.is_one() {
        if is_probable_prime(&cofactor) {
            primes.push(cofactor);
        } else {
            residual = Some(cofactor);
        }
    }
    for p in &primes {
        if !(norms[0].magnitude() % p).is_zero() && !(norms[1].magnitude() % p).is_zero() {
            return Err(Error::Verification(format!(
                "reported prime {p} divides neither congruence norm"
            )));
        }
    }
    Ok(CongruenceBound {
        norms: [norms[0].clone(), norms[1].clone()],
        primes,
        residual,
    })
}

#[derive(Debug, Clone)]
pub struct FormBound {
    pub label: String,
    pub bound: CongruenceBound,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub kappa: u64,
    pub kappa1: u64,
    pub kappa2: BigUint,
    pub kappa_prime: BigUint,
    /// Candidate levels over the support, unit ideal first.
    pub levels: Vec<String>,
    /// Levels with no eigenform supplied, and forms missing the needed
    /// eigenvalue: data limitations, reported rather than failed on.
    pub gaps: Vec<String>,
    pub form_bounds: Vec<FormBound>,
    pub final_bound: BigUint,
}

/// kappa' = max(4, |disc multiple|, C_L, N(frak_p), kappa, kappa_1, kappa_2),
/// then the final bound is kappa' raised by every congruence prime and
/// residual the supplied forms contribute. Coverage gaps are listed in the
/// report, never silently dropped.
pub fn assemble_bound(
    field: &NumberField,
    config: &BoundConfig,
    support: &SupportSets,
    kappa_cert: &PrimitiveDivisorCert,
    forms: &[EigenformData],
) -> Result<BoundReport> {
    if config.c_l < BigUint::one() {
        return Err(Error::InvalidInput("C_L must be at least 1".into()));
    }
    for form in forms {
        form.validate()?;
    }
    let kappa1 = if config.assume_modularity {
        0
    } else {
        config.kappa1.ok_or_else(|| {
            Error::Config(
                "kappa_1 must be supplied when modularity is not assumed".into(),
            )
        })?
    };
    let mut kappa2 = BigUint::zero();
    for ideal in &support.ideals {
        kappa2 = kappa2.max(ideal.norm());
    }
    for p in &support.unsafe_rational {
        // the norm of any ideal over p is at most p^degree; overestimating
        // only raises the bound
        kappa2 = kappa2.max(p.pow(field.degree() as u32));
    }
    let kappa_prime = [
        BigUint::from(4u32),
        config.disc_l_multiple.magnitude().clone(),
        config.c_l.clone(),
        support.frak_p.norm(),
        BigUint::from(kappa_cert.kappa),
        BigUint::from(kappa1),
        kappa2.clone(),
    ]
    .into_iter()
    .max()
    .unwrap();
    let levels = enumerate_levels(field, support, config.max_levels)?;
    let level_strs: Vec<String> = levels.iter().map(|l| format_ideal(l)).collect();
    let mut gaps = Vec::new();
    for (level, s) in levels.iter().zip(&level_strs) {
        let covered = forms
            .iter()
            .any(|form| normalized(&form.level) == normalized(level));
        if !covered {
            gaps.push(format!("level {s}: no eigenform supplied"));
        }
    }
    let mut final_bound = kappa_prime.clone();
    let mut form_bounds = Vec::new();
    let n_p = support.frak_p.norm();
    for form in forms {
        if !form.ap.iter().any(|e| e.prime_label == support.frak_p.label) {
            gaps.push(format!(
                "form {}: no eigenvalue at {}",
                form.label, support.frak_p.label
            ));
            continue;
        }
        let bound = congruence_bound(&n_p, form, &support.frak_p.label, config.factor_bound)?;
        for p in &bound.primes {
            final_bound = final_bound.max(p.clone());
        }
        if let Some(r) = &bound.residual {
            final_bound = final_bound.max(r.clone());
        }
        form_bounds.push(FormBound {
            label: form.label.clone(),
            bound,
        });
    }
    Ok(BoundReport {
        kappa: kappa_cert.kappa,
        kappa1,
        kappa2,
        kappa_prime,
        levels: level_strs,
        gaps,
        form_bounds,
        final_bound,
    })
}
