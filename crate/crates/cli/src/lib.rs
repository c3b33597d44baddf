//! Command-line front end for the `rankin` library.

pub mod cache;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankin::codes::{self, CodeSpec, LinearCode};
use rankin::denssub::{self, SearchOptions, DEFAULT_MAX_CANDIDATES};
use rankin::invariants::{self, RuleSet};
use rankin::lattices::{construction_a, dual_as_code_lattice, IntegralLattice};
use rankin::paperbench::{self, BenchConfig};
use rankin::Error;

use cache::{cached_search, Cache};
use report::{
    BoundsReport, BuildReport, DlReport, Format, GammaPrimeReport, GammaReport, Number, Report, RmTableReport,
    VerifyReport,
};

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SEARCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rankin", version, about = "Exact Rankin and Bergé–Martinet invariants of code lattices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Certificate cache directory [default: user cache dir].
    #[arg(long, env = "RANKIN_CACHE_DIR", global = true)]
    pub cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads for the sublattice search.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..), global = true)]
    pub threads: u16,
    #[arg(long, default_value_t = DEFAULT_MAX_CANDIDATES, global = true)]
    pub max_candidates: usize,
    /// Significant digits of decimal renderings (display only).
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u16).range(1..=200), global = true)]
    pub precision: u16,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the lattice and print its HNF basis and determinant.
    Build(Input),
    /// Certified minimal determinant d_l of rank-l sublattices.
    Dl(WithRank),
    /// gamma_{n,l}(Λ) = d_l / det^{l/n}.
    Gamma(WithRank),
    /// gamma'_{n,l}(Λ_C) through the dual code.
    GammaPrime {
        #[command(flatten)]
        target: WithRank,
        /// Search the dual lattice even when the code is self-dual.
        #[arg(long)]
        no_shortcut: bool,
    },
    /// Propagate bounds over gamma_{n,l} and gamma'_{n,l}, n <= n_max.
    Bounds {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u16).range(2..=32))]
        n_max: u16,
        /// `corollaries`, `all`, or a comma list of rule ids (2,2-lower,3,4,5a,5b,6,7,8).
        #[arg(long, default_value = "corollaries")]
        rules: RuleSet,
    },
    /// Determinants of the Reed–Muller generator and code lattices.
    RmTable {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=6))]
        m_max: u32,
    },
    /// Run the reproduction checks; exit 1 if any fails.
    Verify {
        /// Only checks whose id contains this text.
        filter: Option<String>,
        #[arg(long, default_value_t = BenchConfig::default().random_codes)]
        random_codes: usize,
        #[arg(long, default_value_t = BenchConfig::default().seed)]
        seed: u64,
    },
    /// Decimal bounds on gamma_{2k,k} for large k.
    Asymptotic {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    ParityCheck,
    ReedMuller,
    ExtendedHamming,
    Full,
    Zero,
}

/// A code-spec or lattice file, or a named family with its parameters.
#[derive(Args, Debug, Clone)]
pub struct Input {
    /// JSON code spec (`family` or `generators`) or lattice document (`basis` or `rows`).
    #[arg(long, conflicts_with = "family")]
    pub spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "spec")]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct WithRank {
    #[command(flatten)]
    pub input: Input,
    #[arg(long)]
    pub l: usize,
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. }
            | Error::EnumerationTooLarge { .. }
            | Error::Overflow(_)
            | Error::InconsistentBounds { .. } => EXIT_SEARCH,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

/// What a command operates on.
pub enum Target {
    Code(CodeSpec, LinearCode),
    Lattice(String, IntegralLattice),
}

impl Target {
    pub fn lattice(&self) -> IntegralLattice {
        match self {
            Target::Code(_, code) => construction_a(code),
            Target::Lattice(_, lattice) => lattice.clone(),
        }
    }

    pub fn source(&self) -> String {
        match self {
            Target::Code(spec, _) => spec.label(),
            Target::Lattice(source, _) => source.clone(),
        }
    }
}

impl Input {
    pub fn resolve(&self) -> Result<Target, Failure> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| input_error(format!("spec error: {e}")))?;
            let is_lattice = value.get("basis").is_some() || value.get("rows").is_some();
            if is_lattice {
                let lattice = IntegralLattice::from_json(&text)?;
                return Ok(Target::Lattice(format!("lattice({})", path.display()), lattice));
            }
            let spec = CodeSpec::from_json(&text)?;
            let code = spec.build()?;
            return Ok(Target::Code(spec, code));
        }
        let family = self.family.expect("clap requires --family without --spec");
        let need = |v: Option<usize>, name: &str| v.ok_or_else(|| input_error(format!("--{name} is required")));
        let need_u32 = |v: Option<u32>, name: &str| v.ok_or_else(|| input_error(format!("--{name} is required")));
        let spec = match family {
            Family::ParityCheck => CodeSpec::ParityCheck { n: need(self.n, "n")?, q: need_u32(self.q, "q")? },
            Family::Full => CodeSpec::Full { n: need(self.n, "n")?, q: need_u32(self.q, "q")? },
            Family::Zero => CodeSpec::Zero { n: need(self.n, "n")?, q: need_u32(self.q, "q")? },
            Family::ReedMuller => CodeSpec::ReedMuller { r: need_u32(self.r, "r")?, m: need_u32(self.m, "m")? },
            Family::ExtendedHamming => CodeSpec::ExtendedHamming,
        };
        // Validate through the document parser so flags and files agree.
        let spec = CodeSpec::from_json(&spec.to_json())?;
        let code = spec.build()?;
        Ok(Target::Code(spec, code))
    }
}

/// The result of a command: a report and whether it counts as success.
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    let precision = g.precision as usize;
    let opts = SearchOptions { upper_hint: None, max_candidates: g.max_candidates, threads: g.threads as usize };
    let cache = if g.no_cache { None } else { g.cache.clone().or_else(Cache::default_dir).map(Cache::new) };
    let cache = cache.as_ref();
    let ok = |report| Ok(Outcome { report, exit_code: 0 });

    match &cli.command {
        Command::Build(input) => {
            let target = input.resolve()?;
            let lattice = target.lattice();
            let (q, size) = match &target {
                Target::Code(_, c) => (Some(c.q()), Some(c.cardinality().to_string())),
                Target::Lattice(..) => (None, None),
            };
            ok(Report::Build(BuildReport::new(target.source(), &lattice, q, size)))
        }
        Command::Dl(w) => {
            let target = w.input.resolve()?;
            let (lattice, cert) = search_target(&target, w.l, &opts, cache)?;
            ok(Report::Dl(DlReport {
                source: target.source(),
                n: lattice.dimension(),
                l: w.l,
                d_l: cert.value,
                certificate: cert,
            }))
        }
        Command::Gamma(w) => {
            let target = w.input.resolve()?;
            let (lattice, cert) = search_target(&target, w.l, &opts, cache)?;
            let gamma = invariants::gamma_nl(&lattice, &cert)?;
            ok(Report::Gamma(GammaReport {
                source: target.source(),
                n: lattice.dimension(),
                l: w.l,
                d_l: cert.value,
                det: lattice.det_gram().to_string(),
                gamma: Number::new(&gamma, precision),
                certificate: cert,
            }))
        }
        Command::GammaPrime { target: w, no_shortcut } => {
            let target = w.input.resolve()?;
            let Target::Code(_, code) = &target else {
                return Err(input_error("gamma-prime needs a code (family or code spec), not a lattice document"));
            };
            let (_, cert) = search_target(&target, w.l, &opts, cache)?;
            let self_dual = code.is_self_dual()?;
            let shortcut = self_dual && !no_shortcut;
            let (d_dual, dual_cert) = if shortcut {
                (cert.value, None)
            } else {
                let dual = codes::dual_code(code)?;
                let dual_lattice = dual_as_code_lattice(code)?;
                let hinted = SearchOptions { upper_hint: denssub::code_upper_hint(&dual, w.l), ..opts.clone() };
                let (c, _) = cached_search(cache, &dual_lattice, w.l, &hinted)?;
                (c.value, Some(c))
            };
            let value = invariants::gamma_prime_from_values(code.q(), w.l, cert.value, d_dual);
            ok(Report::GammaPrime(GammaPrimeReport {
                source: target.source(),
                n: code.len(),
                q: code.q(),
                l: w.l,
                self_dual,
                shortcut_used: shortcut,
                d_l: cert.value,
                d_l_dual: d_dual,
                gamma_prime: Number::new(&value, precision),
                certificate: cert,
                dual_certificate: dual_cert,
            }))
        }
        Command::Bounds { n_max, rules } => {
            let seeds = invariants::lattice_lower_bounds(*n_max as usize, &opts)?;
            let table = invariants::propagate_bounds(*n_max as usize, &seeds, rules)?;
            let exit_code = if table.cap_hit { EXIT_SEARCH } else { 0 };
            Ok(Outcome { report: Report::Bounds(BoundsReport::new(&table, precision)), exit_code })
        }
        Command::RmTable { m_max } => ok(Report::RmTable(RmTableReport { rows: paperbench::rm_table(*m_max)? })),
        Command::Verify { filter, random_codes, seed } => {
            let config = BenchConfig {
                random_codes: *random_codes,
                seed: *seed,
                threads: g.threads as usize,
                ..BenchConfig::default()
            };
            let results = paperbench::run_checks(filter.as_deref(), &config);
            if results.is_empty() {
                return Err(input_error(format!(
                    "no check matches `{}`; ids: {}",
                    filter.as_deref().unwrap_or(""),
                    paperbench::check_ids().join(", ")
                )));
            }
            let passed = paperbench::all_passed(&results);
            let exit_code = if passed { 0 } else { EXIT_CHECK_FAILED };
            Ok(Outcome { report: Report::Verify(VerifyReport { passed, results }), exit_code })
        }
        Command::Asymptotic { k, digits } => ok(Report::Asymptotic(invariants::asymptotic_gamma_2k_k(*k, *digits)?)),
    }
}

/// `d_l` of the target lattice; code lattices get the `q^{2l}` hint.
fn search_target(
    target: &Target,
    l: usize,
    opts: &SearchOptions,
    cache: Option<&Cache>,
) -> Result<(IntegralLattice, denssub::SearchCertificate), Failure> {
    let lattice = target.lattice();
    let hint = match target {
        Target::Code(_, code) => denssub::code_upper_hint(code, l),
        Target::Lattice(..) => None,
    };
    let opts = SearchOptions { upper_hint: hint, ..opts.clone() };
    let (cert, origin) = cached_search(cache, &lattice, l, &opts)?;
    if origin == cache::Origin::Hit {
        eprintln!("cache: hit for d_{l}");
    }
    Ok((lattice, cert))
}
