//! Command-line front end: prints polynomial realisations of catalogue
//! algebras, runs verification suites, solves for singular vectors and
//! annihilator slices, and drives the Jordan-side constructions (TKK,
//! Bessel operators) on pair files — all in exact arithmetic.
//!
//! Exit codes: 0 on success, 1 when a verification fails (the failing
//! check prints its diff), 2 on input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use superweyl::catalog::{
    build_d21alpha, build_d21alpha_at, build_standard, catalog_keys, character_values_from_json,
    emit, CatalogAlgebra, CatalogError, CatalogJordan, CatalogObject, D21Alpha, Emittable, Format,
};
use superweyl::jordan::{bessel, conformal_rep, product_rule_check, tkk, JordanSuperpair};
use superweyl::liesuper::{Character, LieSuperalgebra, ZGrading};
use superweyl::realise::{
    check_homomorphism, kernel_up_to_degree, realise_3graded, realise_general, singular_vectors,
    Realisation,
};
use superweyl::scalars::{bernoulli, ParamScalar, ParamSet, Rational};
use superweyl::superpoly::{multi_indices_of_degree, SuperPolynomial};
use superweyl::uenv::{lemma_a1_holds, lemma_a2_holds, lemma_a3_holds, poly_signature};

#[derive(Parser)]
#[command(
    name = "superweyl",
    version,
    about = "Exact polynomial realisations of Lie superalgebras in Weyl superalgebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Latex,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Latex => Format::Latex,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the polynomial realisation of an algebra entry.
    Realise {
        /// Catalogue key (`d21a`, `sl2`, `gl11`, `heisenberg`, `toy5`) or a
        /// path to an algebra JSON file whose basis entries carry degrees.
        #[arg(long)]
        algebra: String,
        /// Grading name; every entry ships its documented grading as
        /// `standard`.
        #[arg(long, default_value = "standard")]
        grading: String,
        /// Character value: a rational such as `3/2`, a scalar expression,
        /// or `formal` for the parameter λ.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// D(2,1;α) only: a rational α outside {0, −1}, or `formal`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Run verification suites against an entry; with no check flags set,
    /// every applicable check runs.
    Verify {
        /// Catalogue key or algebra JSON file.
        #[arg(long)]
        algebra: String,
        /// Certify that the realisation is a homomorphism on all basis
        /// pairs.
        #[arg(long)]
        homomorphism: bool,
        /// Re-run the super Jacobi identity on the structure constants.
        #[arg(long)]
        jacobi: bool,
        /// Check the symmetrisation lemmas on sampled directions.
        #[arg(long)]
        lemmas: bool,
        /// Check Bessel supercommutativity and the product rule (Jordan
        /// entries only).
        #[arg(long)]
        bessel: bool,
        /// Sample degree for lemma and Bessel checks.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Character value (defaults to formal).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// D(2,1;α) only: rational α or `formal`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Solve for singular vectors of the Verma action at a rational point.
    Singular {
        /// Catalogue key or algebra JSON file.
        #[arg(long)]
        algebra: String,
        /// D(2,1;α) only: rational α or `formal`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Rational character value.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Search degrees 1..=N.
        #[arg(long = "max-degree")]
        max_degree: u32,
    },
    /// Print the annihilator slice: enveloping elements of degree ≤ N that
    /// act as zero on the Verma module.
    Kernel {
        /// Catalogue key or algebra JSON file.
        #[arg(long)]
        algebra: String,
        /// Character value: rational, scalar expression, or `formal`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Degree bound for the slice.
        #[arg(long)]
        degree: u32,
        /// D(2,1;α) only: rational α or `formal`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Print the Bernoulli numbers B_0 … B_N.
    Bernoulli { n: u32 },
    /// Build the TKK Lie superalgebra of a Jordan superpair file.
    Tkk {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Build the Bessel operator of a Jordan superpair file at a character
    /// file `{"values": {"0": "-lam0", …}}` over the structure slots.
    Bessel {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        character: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

/// Input problems exit with 2; failed verifications with 1.
enum Failure {
    Input(String),
    Check(String),
}

impl Failure {
    fn input(msg: impl Into<String>) -> Failure {
        Failure::Input(msg.into())
    }
}

fn from_catalog(e: CatalogError) -> Failure {
    match e {
        CatalogError::ConsistencyFailure(_) => Failure::Check(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the stream early (`… | head`)
    // instead of panicking on the broken pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Realise {
            algebra,
            grading,
            lambda,
            alpha,
            format,
        } => {
            check_grading_name(&grading)?;
            let entry = load_lie_entry(&algebra, alpha.as_deref())?;
            let lam = entry.parse_lambda(&lambda)?;
            let r = entry.realisation(&lam)?;
            print!("{}", emit(&Emittable::Realisation(&r), format.into()));
            Ok(())
        }
        Command::Verify {
            algebra,
            homomorphism,
            jacobi,
            lemmas,
            bessel,
            degree,
            lambda,
            alpha,
        } => verify(
            &algebra,
            VerifyFlags {
                homomorphism,
                jacobi,
                lemmas,
                bessel,
                degree,
            },
            lambda.as_deref(),
            alpha.as_deref(),
        ),
        Command::Singular {
            algebra,
            alpha,
            lambda,
            max_degree,
        } => {
            if algebra == "d21a" && !matches!(alpha.as_deref(), Some(a) if a != "formal") {
                return Err(Failure::input(
                    "singular on d21a needs a rational --alpha",
                ));
            }
            let entry = load_lie_entry(&algebra, alpha.as_deref())?;
            let value = parse_rational(&lambda)
                .map_err(|_| Failure::input("singular expects a rational --lambda"))?;
            let lam = entry.formal_lambda()?;
            let r = entry.realisation(&lam)?;
            let spec = BTreeMap::from([("lam".to_string(), value)]);
            for d in 1..=max_degree {
                let kernel = singular_vectors(&r, d, &spec)
                    .map_err(|e| Failure::input(e.to_string()))?;
                println!("degree {d}: {} singular vector(s)", kernel.len());
                for p in kernel {
                    println!("  {p}");
                }
            }
            Ok(())
        }
        Command::Kernel {
            algebra,
            lambda,
            degree,
            alpha,
        } => {
            let entry = load_lie_entry(&algebra, alpha.as_deref())?;
            let lam = entry.parse_lambda(&lambda)?;
            let r = entry.realisation(&lam)?;
            let slice =
                kernel_up_to_degree(&r, degree).map_err(|e| Failure::input(e.to_string()))?;
            println!("annihilator slice up to degree {degree}: {} element(s)", slice.len());
            for u in slice {
                println!("  {u}");
            }
            Ok(())
        }
        Command::Bernoulli { n } => {
            for k in 0..=n {
                println!("B_{k} = {}", bernoulli(k));
            }
            Ok(())
        }
        Command::Tkk { pair, format } => {
            let pair = read_pair(&pair)?;
            let t = tkk(&pair).map_err(|e| Failure::Check(e.to_string()))?;
            print!(
                "{}",
                emit(
                    &Emittable::Algebra(t.algebra(), Some(t.grading())),
                    format.into()
                )
            );
            Ok(())
        }
        Command::Bessel {
            pair,
            character,
            format,
        } => {
            let pair = read_pair(&pair)?;
            let t = tkk(&pair).map_err(|e| Failure::Check(e.to_string()))?;
            let value = read_json(&character)?;
            let values = character_values_from_json(pair.params(), &value, t.str_dim())
                .map_err(from_catalog)?;
            let b = bessel(&pair, &values).map_err(|e| Failure::input(e.to_string()))?;
            print!("{}", emit(&Emittable::Bessel(&b), format.into()));
            let failures = b.supercommutation_failures();
            if !failures.is_empty() {
                for (a, b) in &failures {
                    println!("supercommutation FAIL at ({a}, {b})");
                }
                return Err(Failure::Check(format!(
                    "{} component pair(s) fail to supercommute",
                    failures.len()
                )));
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Entry loading
// ---------------------------------------------------------------------------

/// A Lie-algebra-side entry: a catalogue key or a file, with enough data to
/// realise it.
enum LieEntry {
    Flagship(D21Alpha),
    Standard(CatalogAlgebra),
    File {
        algebra: Arc<LieSuperalgebra>,
        grading: ZGrading,
        charged: Vec<usize>,
    },
}

impl LieEntry {
    fn algebra(&self) -> &Arc<LieSuperalgebra> {
        match self {
            LieEntry::Flagship(d) => d.algebra(),
            LieEntry::Standard(e) => e.algebra(),
            LieEntry::File { algebra, .. } => algebra,
        }
    }

    fn parse_lambda(&self, text: &str) -> Result<ParamScalar, Failure> {
        let params = self.algebra().params();
        if text == "formal" {
            return self.formal_lambda();
        }
        ParamScalar::parse(params, text).map_err(|e| Failure::input(e.to_string()))
    }

    fn formal_lambda(&self) -> Result<ParamScalar, Failure> {
        ParamScalar::parameter(self.algebra().params(), "lam")
            .map_err(|e| Failure::input(e.to_string()))
    }

    fn realisation(&self, lambda: &ParamScalar) -> Result<Realisation, Failure> {
        match self {
            LieEntry::Flagship(d) => d.realisation(lambda).map_err(from_catalog),
            LieEntry::Standard(e) => e.realisation(lambda).map_err(from_catalog),
            LieEntry::File {
                algebra,
                grading,
                charged,
            } => {
                let values = charged
                    .iter()
                    .map(|&i| (i, lambda.clone()))
                    .collect::<BTreeMap<_, _>>();
                let character = Character::new(algebra, grading, values)
                    .map_err(|e| Failure::input(e.to_string()))?;
                let r = if grading.is_three_graded() {
                    realise_3graded(algebra, grading, &character)
                } else {
                    realise_general(algebra, grading, &character)
                };
                r.map_err(|e| Failure::input(e.to_string()))
            }
        }
    }
}

fn check_grading_name(name: &str) -> Result<(), Failure> {
    if name == "standard" {
        return Ok(());
    }
    Err(Failure::input(format!(
        "unknown grading `{name}`; every entry ships its documented grading as `standard`"
    )))
}

fn is_file_source(text: &str) -> bool {
    text.ends_with(".json") || Path::new(text).exists()
}

fn load_lie_entry(source: &str, alpha: Option<&str>) -> Result<LieEntry, Failure> {
    if source == "d21a" {
        let d = match alpha {
            None | Some("formal") => build_d21alpha(),
            Some(text) => {
                let r = parse_rational(text).map_err(|_| {
                    Failure::input("--alpha expects a rational number or `formal`")
                })?;
                build_d21alpha_at(&r)
            }
        }
        .map_err(from_catalog)?;
        return Ok(LieEntry::Flagship(d));
    }
    if alpha.is_some() {
        return Err(Failure::input("only the d21a entry takes --alpha"));
    }
    if is_file_source(source) {
        let value = read_json(Path::new(source))?;
        let params = ParamSet::new(&["alpha", "lam"]);
        let (algebra, grading) = LieSuperalgebra::from_json(&params, &value)
            .map_err(|e| Failure::input(e.to_string()))?;
        let report = algebra.validate();
        if !report.is_ok() {
            return Err(Failure::Check(format!(
                "algebra file fails validation: {}",
                report.first_violation().unwrap_or("unknown violation")
            )));
        }
        let grading = grading.ok_or_else(|| {
            Failure::input("algebra file needs a `degree` on every basis entry")
        })?;
        let charged = file_character_indices(&algebra, &grading, &value)?;
        return Ok(LieEntry::File {
            algebra: Arc::new(algebra),
            grading,
            charged,
        });
    }
    match build_standard(source).map_err(from_catalog)? {
        CatalogObject::Algebra(entry) => Ok(LieEntry::Standard(entry)),
        CatalogObject::Jordan(_) => Err(Failure::input(format!(
            "`{source}` is a Jordan entry; use the tkk/bessel commands (keys: {})",
            catalog_keys().join(", ")
        ))),
    }
}

/// Character support for algebra files: an explicit `"character": [i, …]`
/// list of basis indices, or by default every even 𝔤₀ basis element.
fn file_character_indices(
    algebra: &LieSuperalgebra,
    grading: &ZGrading,
    value: &Value,
) -> Result<Vec<usize>, Failure> {
    if let Some(list) = value.get("character") {
        let list = list
            .as_array()
            .ok_or_else(|| Failure::input("`character` must be an array of basis indices"))?;
        let mut charged = Vec::with_capacity(list.len());
        for item in list {
            let i = item
                .as_u64()
                .ok_or_else(|| Failure::input("`character` entries must be indices"))?
                as usize;
            if i >= algebra.dim() {
                return Err(Failure::input(format!(
                    "character index {i} out of range"
                )));
            }
            charged.push(i);
        }
        return Ok(charged);
    }
    Ok(grading
        .zero_indices()
        .into_iter()
        .filter(|&i| !algebra.parity(i).is_odd())
        .collect())
}

fn load_jordan_entry(source: &str) -> Result<CatalogJordan, Failure> {
    match build_standard(source).map_err(from_catalog)? {
        CatalogObject::Jordan(entry) => Ok(entry),
        CatalogObject::Algebra(_) => Err(Failure::input(format!(
            "`{source}` is not a Jordan entry"
        ))),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{} is not valid JSON: {e}", path.display())))
}

fn read_pair(path: &Path) -> Result<JordanSuperpair, Failure> {
    let value = read_json(path)?;
    JordanSuperpair::from_json(&value).map_err(|e| Failure::input(e.to_string()))
}

fn parse_rational(text: &str) -> Result<Rational, ()> {
    let empty = ParamSet::empty();
    ParamScalar::parse(&empty, text)
        .ok()
        .and_then(|s| s.as_rational())
        .ok_or(())
}

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

struct VerifyFlags {
    homomorphism: bool,
    jacobi: bool,
    lemmas: bool,
    bessel: bool,
    degree: u32,
}

impl VerifyFlags {
    fn all(&self) -> bool {
        !(self.homomorphism || self.jacobi || self.lemmas || self.bessel)
    }
}

struct CheckLog {
    failed: usize,
}

impl CheckLog {
    fn new() -> CheckLog {
        CheckLog { failed: 0 }
    }

    fn record(&mut self, name: &str, ok: bool, detail: &str) {
        if ok {
            println!("{name}: ok");
        } else {
            self.failed += 1;
            if detail.is_empty() {
                println!("{name}: FAIL");
            } else {
                println!("{name}: FAIL — {detail}");
            }
        }
    }

    fn finish(self) -> Result<(), Failure> {
        if self.failed == 0 {
            Ok(())
        } else {
            Err(Failure::Check(format!("{} check(s) failed", self.failed)))
        }
    }
}

fn verify(
    source: &str,
    flags: VerifyFlags,
    lambda: Option<&str>,
    alpha: Option<&str>,
) -> Result<(), Failure> {
    let is_jordan_key = matches!(
        build_standard(source),
        Ok(CatalogObject::Jordan(_))
    );
    if is_jordan_key {
        if flags.lemmas {
            return Err(Failure::input(
                "--lemmas applies to Lie superalgebra entries",
            ));
        }
        return verify_jordan(source, flags);
    }
    if flags.bessel {
        return Err(Failure::input("--bessel applies to Jordan entries"));
    }
    let entry = load_lie_entry(source, alpha)?;
    let g = entry.algebra();
    let mut log = CheckLog::new();
    log.record("construction", true, "");
    if flags.all() || flags.jacobi {
        let report = g.validate();
        log.record(
            "jacobi",
            report.is_ok(),
            report.first_violation().unwrap_or(""),
        );
    }
    if flags.all() || flags.homomorphism {
        let lam = match lambda {
            Some(text) => entry.parse_lambda(text)?,
            None => entry.formal_lambda()?,
        };
        let r = entry.realisation(&lam)?;
        let report = check_homomorphism(&r);
        let detail = report
            .failures()
            .first()
            .map(|(pair, msg)| format!("{pair}: {msg}"))
            .unwrap_or_default();
        log.record(
            &format!("homomorphism ({} pairs)", report.pairs_checked()),
            report.is_ok(),
            &detail,
        );
    }
    if flags.all() || flags.lemmas {
        verify_lemmas(g, flags.degree, &mut log)?;
    }
    log.finish()
}

/// Deterministic sample directions: the first two even and first two odd
/// basis vectors.
fn sample_directions(g: &LieSuperalgebra) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..g.dim().min(2) {
        out.push(i);
    }
    let e = g.even_count();
    for i in e..(e + 2).min(g.dim()) {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

fn verify_lemmas(
    g: &Arc<LieSuperalgebra>,
    degree: u32,
    log: &mut CheckLog,
) -> Result<(), Failure> {
    let sig = poly_signature(g);
    let names: Vec<&str> = (0..g.dim().min(3)).map(|i| g.name(i)).collect();
    let text = format!("(1 + {})^{}", names.join(" + "), degree.max(1));
    let y = SuperPolynomial::parse(&sig, g.params(), &text)
        .map_err(|e| Failure::input(e.to_string()))?;
    let k_cap = if g.dim() > 8 { 1 } else { 2 };
    for &i in &sample_directions(g) {
        let x = g.basis_vector(i);
        let a1 = lemma_a1_holds(g, &x, &y).map_err(|e| Failure::input(e.to_string()))?;
        log.record(&format!("lemma_a1 (X = {})", g.name(i)), a1, "");
        let a2 = lemma_a2_holds(g, &x, &y).map_err(|e| Failure::input(e.to_string()))?;
        log.record(&format!("lemma_a2 (X = {})", g.name(i)), a2, "");
        let mut a3 = true;
        let mut checked = 0usize;
        for total in 1..=k_cap {
            for k in multi_indices_of_degree(g.parities(), total) {
                checked += 1;
                if !lemma_a3_holds(g, &x, &y, &k).map_err(|e| Failure::input(e.to_string()))? {
                    a3 = false;
                }
            }
        }
        log.record(
            &format!("lemma_a3 (X = {}, {} multi-indices)", g.name(i), checked),
            a3,
            "",
        );
    }
    Ok(())
}

fn verify_jordan(source: &str, flags: VerifyFlags) -> Result<(), Failure> {
    let entry = load_jordan_entry(source)?;
    let pair = entry.pair().map_err(from_catalog)?;
    let mut log = CheckLog::new();
    log.record("construction", true, "");
    let t = tkk(&pair).map_err(|e| Failure::Check(e.to_string()))?;
    if flags.all() || flags.jacobi {
        let report = t.algebra().validate();
        log.record(
            "jacobi (TKK)",
            report.is_ok(),
            report.first_violation().unwrap_or(""),
        );
    }
    let params = pair.params();
    let lam0 =
        ParamScalar::parameter(params, "lam0").map_err(|e| Failure::input(e.to_string()))?;
    let mut values = vec![ParamScalar::zero(params); t.str_dim()];
    values[0] = lam0.neg();
    if flags.all() || flags.homomorphism {
        let r = conformal_rep(&pair, &values).map_err(|e| Failure::Check(e.to_string()))?;
        let report = check_homomorphism(&r);
        let detail = report
            .failures()
            .first()
            .map(|(pair, msg)| format!("{pair}: {msg}"))
            .unwrap_or_default();
        log.record(
            &format!("homomorphism ({} pairs)", report.pairs_checked()),
            report.is_ok(),
            &detail,
        );
    }
    if flags.all() || flags.bessel {
        let b = entry.bessel().map_err(from_catalog)?;
        let failures = b.supercommutation_failures();
        log.record(
            "bessel supercommutation",
            failures.is_empty(),
            &failures
                .first()
                .map(|(a, b)| format!("components ({a}, {b})"))
                .unwrap_or_default(),
        );
        let sig = pair.vminus();
        let names: Vec<&str> = (0..sig.dim()).map(|i| sig.name(i)).collect();
        let text = format!("(1 + {})^{}", names.join(" + "), flags.degree.max(1));
        let phi = SuperPolynomial::parse(sig, params, &text)
            .map_err(|e| Failure::input(e.to_string()))?;
        let report = product_rule_check(&b, &phi, &phi);
        log.record(
            &format!(
                "bessel product rule ({} components)",
                report.components_checked()
            ),
            report.is_ok(),
            report.failures().first().map(String::as_str).unwrap_or(""),
        );
    }
    log.finish()
}

