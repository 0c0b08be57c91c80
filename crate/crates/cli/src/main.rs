//! Command-line driver: exact divisibility-sequence computation, property
//! certificates, the descent/Frey pipeline, and exponent-bound reports.
//!
//! Exit codes: 0 success, 1 a verified identity or certified consequence
//! failed, 2 bad input or environment, 3 a budget or undecidable case.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use eds_core::bound::{assemble_bound, BoundConfig};
use eds_core::cache;
use eds_core::eds::{
    check_strong_divisibility, check_valuation_law, find_power_terms,
    primitive_divisor_certificate, verify_certificate_consequence, CertConfig, Sequence,
};
use eds_core::error::{Error, Result};
use eds_core::frey::{
    build_frey, build_support, descent_triple, gcd_support_check, normalize_signs,
    scale_integral, verify_prop_conclusions, ReductionClass,
};
use eds_core::input::{load_curve, load_forms_dir, CurveInput};
use eds_core::tower::{build_tower, Element};
use eds_core::{BigInt, BigUint};

use report::{element, s, strings, Certificate};

#[derive(Parser)]
#[command(
    name = "eds",
    version,
    about = "Exact elliptic divisibility sequences: terms, certificates, Frey data, exponent bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute terms (n, A_n, B_n, C_n), using the cache when one is configured
    Gen(SeqArgs),
    /// Check strong divisibility and the valuation law on computed terms
    Props(SeqArgs),
    /// Produce a primitive-divisor certificate and re-verify its consequence
    Primdiv(PrimdivArgs),
    /// List terms whose denominator root B_n is a perfect power
    Powers(PowersArgs),
    /// Descent and Frey-curve pipeline
    #[command(subcommand)]
    Frey(FreyCmd),
    /// Exponent-bound assembly from support data and eigenform files
    #[command(subcommand)]
    Bound(BoundCmd),
}

#[derive(Subcommand)]
enum FreyCmd {
    /// Run the full pipeline at one index and emit a certificate
    Build(FreyArgs),
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Assemble the exponent-bound report
    Exponent(BoundArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Curve file: {"a": [a1,a2,a3,a4,a6], "point": {"x": "p/q", "y": "r/s"}}
    #[arg(long)]
    curve: PathBuf,
    /// Emit a JSON certificate instead of plain text
    #[arg(long)]
    json: bool,
    /// Term cache directory (falls back to $EDS_CACHE_DIR when set)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl CommonArgs {
    fn effective_cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os("EDS_CACHE_DIR").map(PathBuf::from))
    }
}

#[derive(Args)]
struct SeqArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Highest index to compute
    #[arg(long, default_value_t = 30)]
    max_index: u64,
}

#[derive(Args)]
struct PrimdivArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Highest index for the consequence re-verification scan
    #[arg(long, default_value_t = 30)]
    max_index: u64,
    /// Comma-separated primes the certified prime must avoid
    /// (default: the curve's bad primes together with those of B_1)
    #[arg(long)]
    exclude: Option<String>,
    /// Witness search starts above this index
    #[arg(long, default_value_t = 2)]
    silverman_start: u64,
    /// Trial-division budget for the factorizations involved
    #[arg(long, default_value_t = 1_000_000)]
    trial_division_bound: u64,
}

#[derive(Args)]
struct PowersArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Highest index to scan
    #[arg(long, default_value_t = 30)]
    max_index: u64,
    /// Report only prime exponents at least this large
    #[arg(long, default_value_t = 2)]
    min_exponent: u64,
}

#[derive(Args)]
struct FreyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sequence index n of the term to descend
    #[arg(short = 'n', long = "index", default_value_t = 1)]
    index: u64,
    /// Exponent whose divisibility the reduction table must witness
    #[arg(long)]
    ell: Option<u64>,
    /// Verify reduction at every outside prime of norm up to this bound
    #[arg(long, default_value_t = 1000)]
    norm_bound: u64,
    /// Include the tower construction steps in the output
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Directory of eigenform JSON files
    #[arg(long)]
    forms: Option<PathBuf>,
    /// Irreducibility constant (decimal integer, at least 1)
    #[arg(long = "C_L", default_value = "1")]
    c_l: String,
    /// Take kappa_1 = 0 by assuming modularity over the tower field
    #[arg(long)]
    assume_modularity: bool,
    /// Explicit kappa_1 (required when modularity is not assumed)
    #[arg(long)]
    kappa1: Option<u64>,
    /// Guard on the number of candidate levels enumerated
    #[arg(long, default_value_t = 100_000)]
    max_levels: u64,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`eds gen | head`) instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Props(a) => cmd_props(a),
        Cmd::Primdiv(a) => cmd_primdiv(a),
        Cmd::Powers(a) => cmd_powers(a),
        Cmd::Frey(FreyCmd::Build(a)) => cmd_frey_build(a),
        Cmd::Bound(BoundCmd::Exponent(a)) => cmd_bound_exponent(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_class() as u8)
        }
    }
}

/// Computes the sequence through the cache when a directory is configured:
/// take the lock, reuse cached terms, extend to the requested index, persist
/// any growth, and hand back exactly the requested prefix. The lock guard is
/// returned so it outlives any later cache access in the same command.
fn obtain_sequence(
    input: &CurveInput,
    cache_dir: Option<&PathBuf>,
    max_index: u64,
) -> Result<(Sequence, Option<cache::CacheLock>)> {
    match cache_dir {
        Some(dir) => {
            let lock = cache::acquire_lock(dir)?;
            let cached = cache::load(dir, &input.curve, &input.point)?;
            let have = cached.as_ref().map(|t| t.len() as u64).unwrap_or(0);
            let target = max_index.max(have);
            let full = match cached {
                Some(terms) => Sequence::extend(&input.curve, &input.point, terms, target)?,
                None => Sequence::compute(&input.curve, &input.point, target)?,
            };
            if full.max_index() > have {
                cache::store(dir, &input.curve, &input.point, &full)?;
            }
            let mut seq = full;
            seq.terms.truncate(max_index as usize);
            Ok((seq, Some(lock)))
        }
        None => Ok((Sequence::compute(&input.curve, &input.point, max_index)?, None)),
    }
}

/// Inputs are echoed semantically (coefficients and base point), never as
/// file paths, so certificates are byte-identical across runs and machines.
fn curve_echo(input: &CurveInput) -> Value {
    let (x, y) = match &input.point {
        eds_core::curve::Point::Affine(x, y) => (x.to_string(), y.to_string()),
        eds_core::curve::Point::Infinity => ("inf".to_string(), "inf".to_string()),
    };
    json!({
        "a": strings(input.curve.a.iter()),
        "point": {"x": x, "y": y},
    })
}

fn require_positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidInput(format!("{name} must be positive")));
    }
    Ok(())
}

fn parse_prime_list(list: &str) -> Result<Vec<BigUint>> {
    let mut out = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let p: BigUint = part
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad prime in exclude list: {part:?}")))?;
        out.push(p);
    }
    Ok(out)
}

fn fmt_element(e: &Element) -> String {
    let coords: Vec<String> = e.coords.iter().map(|c| c.to_string()).collect();
    format!("[{}]", coords.join(", "))
}

fn cmd_gen(a: SeqArgs) -> Result<()> {
    require_positive("--max-index", a.max_index)?;
    let input = load_curve(&a.common.curve)?;
    let dir = a.common.effective_cache_dir();
    let (seq, _lock) = obtain_sequence(&input, dir.as_ref(), a.max_index)?;
    if a.common.json {
        let mut cert = Certificate::new(
            "eds.gen",
            json!({"curve": curve_echo(&input), "max_index": s(a.max_index)}),
        );
        let terms: Vec<Value> = seq
            .terms
            .iter()
            .map(|t| json!({"n": s(t.n), "a": s(&t.a), "b": s(&t.b), "c": s(&t.c)}))
            .collect();
        cert.set("terms", Value::Array(terms));
        cert.outcome(true);
        println!("{}", cert.render());
    } else {
        println!("n A_n B_n C_n");
        for t in &seq.terms {
            println!("{} {} {} {}", t.n, t.a, t.b, t.c);
        }
    }
    Ok(())
}

fn cmd_props(a: SeqArgs) -> Result<()> {
    require_positive("--max-index", a.max_index)?;
    let input = load_curve(&a.common.curve)?;
    let dir = a.common.effective_cache_dir();
    let (seq, _lock) = obtain_sequence(&input, dir.as_ref(), a.max_index)?;
    check_strong_divisibility(&seq)?;
    let a1_even = (&input.curve.a[0] % BigInt::from(2)) == BigInt::from(0);
    let val = check_valuation_law(&seq, a1_even)?;
    if a.common.json {
        let mut cert = Certificate::new(
            "eds.props",
            json!({"curve": curve_echo(&input), "max_index": s(a.max_index)}),
        );
        cert.set(
            "strong_divisibility",
            json!({"checked_through": s(seq.max_index()), "status": "pass"}),
        );
        cert.set(
            "valuation_law",
            json!({
                "a1_even": a1_even,
                "pairs_checked": s(val.pairs_checked),
                "two_exact_pairs": s(val.two_exact_pairs),
                "max_two_defect": s(val.max_two_defect),
            }),
        );
        cert.outcome(true);
        println!("{}", cert.render());
    } else {
        println!(
            "strong divisibility: pass (gcd(B_m, B_n) = B_gcd(m,n) through index {})",
            seq.max_index()
        );
        println!(
            "valuation law: {} pairs checked, {} with the two-part exact, \
             largest two-adic excess {} (reported, not asserted)",
            val.pairs_checked, val.two_exact_pairs, val.max_two_defect
        );
    }
    Ok(())
}

fn cmd_primdiv(a: PrimdivArgs) -> Result<()> {
    require_positive("--max-index", a.max_index)?;
    require_positive("--silverman-start", a.silverman_start)?;
    require_positive("--trial-division-bound", a.trial_division_bound)?;
    let input = load_curve(&a.common.curve)?;
    let excluded = match &a.exclude {
        Some(list) => parse_prime_list(list)?,
        None => input.curve.rational_bad_set(a.trial_division_bound)?,
    };
    let cfg = CertConfig {
        silverman_start: a.silverman_start,
        factor_bound: a.trial_division_bound,
    };
    let cert_data = primitive_divisor_certificate(&input.curve, &input.point, &excluded, &cfg)?;
    let scan_to = a.max_index.max(cert_data.witness_index);
    let dir = a.common.effective_cache_dir();
    let (seq, _lock) = obtain_sequence(&input, dir.as_ref(), scan_to)?;
    let checked = verify_certificate_consequence(&seq, &cert_data)?;
    if a.common.json {
        let mut cert = Certificate::new(
            "eds.primdiv",
            json!({
                "curve": curve_echo(&input),
                "max_index": s(a.max_index),
                "excluded": strings(&excluded),
                "silverman_start": s(a.silverman_start),
                "trial_division_bound": s(a.trial_division_bound),
            }),
        );
        cert.set(
            "certificate_data",
            json!({
                "q": s(&cert_data.q),
                "v_q_b1": s(cert_data.v_q_b1),
                "e": s(cert_data.e),
                "witness_index": s(cert_data.witness_index),
                "kappa": s(cert_data.kappa),
                "defect": s(cert_data.defect),
                "prime": s(&cert_data.prime),
            }),
        );
        cert.set(
            "consequence",
            json!({"terms_checked": s(checked), "scanned_through": s(seq.max_index())}),
        );
        cert.outcome(true);
        println!("{}", cert.render());
    } else {
        println!(
            "certified: q = {} (v_q(B_1) = {}, order e = {}), witness index {}, \
             kappa = {}, defect = {}",
            cert_data.q,
            cert_data.v_q_b1,
            cert_data.e,
            cert_data.witness_index,
            cert_data.kappa,
            cert_data.defect
        );
        println!(
            "prime {} divides B_{} and avoids the excluded set",
            cert_data.prime, cert_data.witness_index
        );
        println!(
            "consequence re-verified on {checked} nontrivial terms through index {}",
            seq.max_index()
        );
    }
    Ok(())
}

fn cmd_powers(a: PowersArgs) -> Result<()> {
    require_positive("--max-index", a.max_index)?;
    let input = load_curve(&a.common.curve)?;
    let dir = a.common.effective_cache_dir();
    let (seq, _lock) = obtain_sequence(&input, dir.as_ref(), a.max_index)?;
    let hits = find_power_terms(&seq, a.min_exponent);
    if a.common.json {
        let mut cert = Certificate::new(
            "eds.powers",
            json!({
                "curve": curve_echo(&input),
                "max_index": s(a.max_index),
                "min_exponent": s(a.min_exponent),
            }),
        );
        let rows: Vec<Value> = hits
            .iter()
            .map(|h| json!({"n": s(h.n), "base": s(&h.base), "exponent": s(h.exponent)}))
            .collect();
        cert.set("hits", Value::Array(rows));
        cert.outcome(true);
        println!("{}", cert.render());
    } else if hits.is_empty() {
        println!(
            "no B_n is a perfect power with prime exponent >= {} through index {}",
            a.min_exponent.max(2),
            seq.max_index()
        );
    } else {
        for h in &hits {
            println!("n = {}: B_n = {}^{}", h.n, h.base, h.exponent);
        }
    }
    Ok(())
}

fn cmd_frey_build(a: FreyArgs) -> Result<()> {
    require_positive("--index", a.index)?;
    require_positive("--norm-bound", a.norm_bound)?;
    if let Some(l) = a.ell {
        if l < 2 {
            return Err(Error::InvalidInput("--ell must be a prime >= 2".into()));
        }
    }
    let input = load_curve(&a.common.curve)?;
    let inputs = json!({
        "curve": curve_echo(&input),
        "n": s(a.index),
        "ell": a.ell.map(s).unwrap_or(Value::Null),
        "norm_bound": s(a.norm_bound),
    });
    let mut cert = Certificate::new("frey.build", inputs);
    match run_frey_pipeline(&a, &input, &mut cert) {
        Ok(()) => {
            cert.outcome(true);
            if a.common.json {
                println!("{}", cert.render());
            }
            Ok(())
        }
        Err(e) => {
            // A failed stage still leaves every completed stage in the
            // certificate; the error rides along and the outcome says so.
            cert.set("error", s(&e));
            cert.outcome(false);
            if a.common.json {
                println!("{}", cert.render());
            }
            Err(e)
        }
    }
}

fn run_frey_pipeline(a: &FreyArgs, input: &CurveInput, cert: &mut Certificate) -> Result<()> {
    let curve = &input.curve;
    let verbose = !a.common.json;
    eds_core::eds::require_prime_in_b1(curve, &input.point)?;
    let (xs, ys) = curve
        .to_short_point(&input.point)
        .ok_or_else(|| Error::InvalidInput("the base point must be affine".into()))?;
    let tower = build_tower(&curve.short_model(), &xs, &ys)?;
    let mut tower_json = json!({
        "degree": s(tower.field.degree()),
        "splitting_degree": s(tower.k_degree),
        "totally_real": tower.totally_real,
    });
    if a.explain {
        let steps: Vec<Value> = tower
            .steps
            .iter()
            .map(|st| json!({"step": st.description.clone(), "degree_after": s(st.degree_after)}))
            .collect();
        tower_json["steps"] = Value::Array(steps);
    }
    cert.set("tower", tower_json);
    if verbose {
        println!(
            "tower: degree {} (cubic splitting field of degree {}), totally real: {}",
            tower.field.degree(),
            tower.k_degree,
            tower.totally_real
        );
        if a.explain {
            for st in &tower.steps {
                println!("  {} -> degree {}", st.description, st.degree_after);
            }
        }
    }

    let cfg = CertConfig::default();
    let (support, pd) = build_support(&tower, curve, &input.point, &cfg)?;
    cert.set(
        "support",
        json!({
            "ideals": strings(support.ideals.iter().map(|i| &i.label)),
            "unsafe_rational": strings(&support.unsafe_rational),
            "rational_primes": strings(&support.t_rational),
            "frak_p": s(&support.frak_p.label),
        }),
    );
    cert.set(
        "primitive_divisor",
        json!({
            "q": s(&pd.q),
            "e": s(pd.e),
            "witness_index": s(pd.witness_index),
            "kappa": s(pd.kappa),
            "defect": s(pd.defect),
            "prime": s(&pd.prime),
        }),
    );
    if verbose {
        println!(
            "support: {} prime ideals over {{{}}}, distinguished ideal {} over certified prime {}",
            support.ideals.len(),
            support
                .t_rational
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            support.frak_p.label,
            pd.prime
        );
    }

    let seq = Sequence::compute(curve, &input.point, a.index.max(1))?;
    let trip = descent_triple(&tower, curve, &seq, a.index)?;
    cert.set(
        "epsilon",
        Value::Array(trip.eps.iter().map(element).collect()),
    );
    if verbose {
        println!("descent at n = {}:", a.index);
        for (i, e) in trip.eps.iter().enumerate() {
            println!("  eps_{} = {}", i + 1, fmt_element(e));
        }
    }

    let gcd_rep = gcd_support_check(&tower, curve, &trip)?;
    let pair_rows: Vec<Value> = gcd_rep
        .pairs
        .iter()
        .map(|p| {
            json!({
                "i": s(p.i + 1),
                "j": s(p.j + 1),
                "norm_diff": s(&p.norm_diff),
                "norm_sum": s(&p.norm_sum),
                "shared": s(&p.shared),
                "residual": s(&p.residual),
            })
        })
        .collect();
    cert.set(
        "gcd_support",
        json!({"pairs": Value::Array(pair_rows), "all_supported": gcd_rep.all_supported}),
    );
    if verbose {
        println!(
            "pairwise gcd support vs 2 disc(E): {}",
            if gcd_rep.all_supported {
                "all pairs supported"
            } else {
                "residual primes remain (reported)"
            }
        );
    }

    let normalized = normalize_signs(&tower, &trip, &support.frak_p)?;
    cert.set(
        "epsilon_normalized",
        Value::Array(normalized.eps.iter().map(element).collect()),
    );

    let (z, alpha) = scale_integral(&tower, &normalized, Some(&support))?;
    cert.set("z", Value::Array(z.iter().map(element).collect()));
    cert.set("alpha", element(&alpha));
    if verbose {
        for (i, zi) in z.iter().enumerate() {
            println!("  z_{} = {}", i + 1, fmt_element(zi));
        }
        println!("  alpha = {}", fmt_element(&alpha));
    }

    let frey = build_frey(&tower.field, &z, alpha)?;
    cert.set("delta_f", element(&frey.delta_f));
    cert.set("c4_f", element(&frey.c4_f));
    if verbose {
        println!("Frey model Y^2 = X(X - z_1)(X + z_2):");
        println!("  Delta_F = {}", fmt_element(&frey.delta_f));
        println!("  c4      = {}", fmt_element(&frey.c4_f));
    }

    let prop = verify_prop_conclusions(&tower.field, &frey, &support, a.ell, a.norm_bound)?;
    let rows: Vec<Value> = prop
        .rows
        .iter()
        .map(|r| {
            json!({
                "ideal": s(&r.label),
                "norm": s(&r.norm),
                "v_delta": s(r.v_delta),
                "v_c4": r.v_c4.map(s).unwrap_or(Value::Null),
                "class": match r.class {
                    ReductionClass::Good => "good",
                    ReductionClass::Multiplicative => "multiplicative",
                    ReductionClass::Unclassified => "unclassified",
                },
                "ell_divides_v_delta": r.ell_divides.map(Value::Bool).unwrap_or(Value::Null),
            })
        })
        .collect();
    let power_rows: Vec<Value> = prop
        .power_certificate
        .iter()
        .map(|p| {
            json!({
                "z_index": s(p.index + 1),
                "stripped_norm": s(&p.stripped_norm),
                "is_exact_power": p.is_power,
            })
        })
        .collect();
    cert.set(
        "reduction",
        json!({
            "frak_p": s(&prop.frak_p_label),
            "norm_bound": s(prop.norm_bound),
            "rows": Value::Array(rows),
            "power_certificate": Value::Array(power_rows),
            "skipped_ramified": strings(&prop.skipped_ramified),
            "violations": strings(&prop.violations),
        }),
    );
    if verbose {
        let good = prop
            .rows
            .iter()
            .filter(|r| r.class == ReductionClass::Good)
            .count();
        let mult = prop
            .rows
            .iter()
            .filter(|r| r.class == ReductionClass::Multiplicative)
            .count();
        println!(
            "reduction outside the support (norm <= {}): {} good, {} multiplicative, \
             {} skipped ramified",
            prop.norm_bound,
            good,
            mult,
            prop.skipped_ramified.len()
        );
        println!(
            "distinguished ideal {}: v(Delta_F) = {}",
            prop.frak_p_label,
            prop.rows.first().map(|r| r.v_delta).unwrap_or(0)
        );
        if !prop.violations.is_empty() {
            for v in &prop.violations {
                println!("violation: {v}");
            }
        }
    }
    prop.ensure_ok()
}

fn cmd_bound_exponent(a: BoundArgs) -> Result<()> {
    require_positive("--max-levels", a.max_levels)?;
    let input = load_curve(&a.common.curve)?;
    let curve = &input.curve;
    eds_core::eds::require_prime_in_b1(curve, &input.point)?;
    let (xs, ys) = curve
        .to_short_point(&input.point)
        .ok_or_else(|| Error::InvalidInput("the base point must be affine".into()))?;
    let tower = build_tower(&curve.short_model(), &xs, &ys)?;
    let cfg = CertConfig::default();
    let (support, pd) = build_support(&tower, curve, &input.point, &cfg)?;
    let forms = match &a.forms {
        Some(dir) => load_forms_dir(dir)?,
        None => Vec::new(),
    };
    let c_l: BigUint = a
        .c_l
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("C_L must be a decimal integer, got {:?}", a.c_l)))?;
    let config = BoundConfig {
        c_l,
        assume_modularity: a.assume_modularity,
        kappa1: a.kappa1,
        disc_l_multiple: tower.field.disc_multiple(),
        max_levels: a.max_levels,
        factor_bound: cfg.factor_bound,
    };
    let rep = assemble_bound(&tower.field, &config, &support, &pd, &forms)?;
    if a.common.json {
        let mut cert = Certificate::new(
            "bound.exponent",
            json!({
                "curve": curve_echo(&input),
                "C_L": s(&config.c_l),
                "assume_modularity": a.assume_modularity,
                "kappa1": a.kappa1.map(s).unwrap_or(Value::Null),
                "max_levels": s(a.max_levels),
                "forms_supplied": s(forms.len()),
            }),
        );
        cert.set(
            "support",
            json!({
                "ideals": strings(support.ideals.iter().map(|i| &i.label)),
                "frak_p": s(&support.frak_p.label),
            }),
        );
        cert.set(
            "kappa_values",
            json!({
                "kappa": s(rep.kappa),
                "kappa1": s(rep.kappa1),
                "kappa2": s(&rep.kappa2),
                "kappa_prime": s(&rep.kappa_prime),
            }),
        );
        cert.set("levels", strings(&rep.levels));
        cert.set("gaps", strings(&rep.gaps));
        let form_rows: Vec<Value> = rep
            .form_bounds
            .iter()
            .map(|fb| {
                json!({
                    "form": s(&fb.label),
                    "norm_minus": s(&fb.bound.norms[0]),
                    "norm_plus": s(&fb.bound.norms[1]),
                    "primes": strings(&fb.bound.primes),
                    "residual": fb.bound.residual.as_ref().map(s).unwrap_or(Value::Null),
                })
            })
            .collect();
        cert.set("form_bounds", Value::Array(form_rows));
        cert.set("final_bound", s(&rep.final_bound));
        cert.outcome(true);
        println!("{}", cert.render());
    } else {
        println!(
            "kappa = {} (certified witness index {}), kappa_1 = {}, kappa_2 = {}",
            rep.kappa, pd.witness_index, rep.kappa1, rep.kappa2
        );
        println!("kappa' = {}", rep.kappa_prime);
        println!(
            "candidate levels over the support: {} ({} without supplied eigenform data)",
            rep.levels.len(),
            rep.gaps.len()
        );
        for fb in &rep.form_bounds {
            let primes: Vec<String> = fb.bound.primes.iter().map(|p| p.to_string()).collect();
            let residual = fb
                .bound
                .residual
                .as_ref()
                .map(|r| format!(", residual {r}"))
                .unwrap_or_default();
            println!(
                "form {}: congruence norms {} and {}, primes {{{}}}{}",
                fb.label,
                fb.bound.norms[0],
                fb.bound.norms[1],
                primes.join(", "),
                residual
            );
        }
        println!("final exponent bound: {}", rep.final_bound);
    }
    Ok(())
}
