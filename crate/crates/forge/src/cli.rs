use std::collections::BTreeMap;
use std::ffi::OsString;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use malcev_forge_core::affine::malcev_obstruction;
use malcev_forge_core::eaa::{check_eaa, verify_core_pair};
use malcev_forge_core::toral::check_partial_grading;
use malcev_forge_core::{
    check_eaa_loop, check_form, check_identity, check_loop_identity, decompose, verify_toral, Check, CheckReport,
    Cocycle, Error, Flavor, IdentityName, IdentitySpec, LoopAlgebra, Mode, QuadraticToralPair, Rat, Search, Status,
    ToralPair, Value,
};

use crate::format::{load, Document};
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "malcev-forge",
    version,
    about = "Exact verification of identities and axioms for graded algebras"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    /// Worker threads for tuple enumeration (default: all cores)
    #[arg(long, global = true, env = "MALCEV_FORGE_THREADS")]
    threads: Option<usize>,
    /// Add elapsed milliseconds to the report
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Exhaustive when the identity is multilinear, sampled otherwise
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Random combinations tried per root after the basis scans
    #[arg(long, default_value_t = malcev_forge_core::eaa::DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchArgs {
    fn search(&self) -> Search {
        Search {
            budget: self.budget,
            seed: self.seed,
            ..Search::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a polynomial identity on the structure constants
    Identities {
        /// `builtin:NAME` or a path to an algebra file
        subject: String,
        #[arg(long)]
        identity: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = malcev_forge_core::identity::DEFAULT_SAMPLE_COUNT)]
        count: usize,
    },
    /// Check invariance, symmetry, gradedness and nondegeneracy of the form
    Form { subject: String },
    /// Root space decomposition relative to the toral subalgebra
    Decompose {
        subject: String,
        /// Also check which products respect the root grading
        #[arg(long)]
        partial_grading: bool,
    },
    /// Check the extended affine axioms of the toral pair
    Eaa {
        subject: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Compute the core and check it as a toral pair
    Core {
        subject: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build a loop algebra and check an identity or the axioms on a box
    Affinize {
        subject: String,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Row-major entries of the symmetric matrix q, comma separated
        #[arg(long, value_delimiter = ',')]
        cocycle: Option<Vec<String>>,
        #[arg(long = "box", default_value_t = 1)]
        box_k: u32,
        /// An identity name, or `eaa`
        #[arg(long)]
        check: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Evaluate the conditions deciding which loop extensions stay Malcev
    Obstruction { subject: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Plain,
    Tilde,
    Hat,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Plain => Flavor::Plain,
            FlavorArg::Tilde => Flavor::Tilde,
            FlavorArg::Hat => Flavor::Hat,
        }
    }
}

type Subject = BTreeMap<String, Value>;

fn refused(name: &str, reason: impl ToString) -> CheckReport {
    CheckReport::from_iter([
        Check::new(format!("{name}.precondition"), Status::Refused).detail("reason", reason.to_string())
    ])
}

fn toral_pair(doc: &Document) -> Result<ToralPair, Error> {
    let h = doc
        .toral
        .clone()
        .ok_or_else(|| Error::InvalidToral("the subject declares no toral subalgebra".into()))?;
    ToralPair::new(doc.algebra.clone(), h)
}

fn quadratic(doc: &Document) -> Result<QuadraticToralPair, Error> {
    QuadraticToralPair::new(decompose(&toral_pair(doc)?)?)
}

fn decompose_report(doc: &Document, partial: bool) -> Result<CheckReport, Error> {
    let d = decompose(&toral_pair(doc)?)?;
    let alg = d.algebra();
    let mut r = CheckReport::new();
    let mut roots = Vec::new();
    let mut dims = Vec::new();
    let mut spaces = Vec::new();
    for (k, root) in d.roots().iter().enumerate() {
        roots.push(Value::from(root.to_string()));
        dims.push(Value::from(d.dim_of(k)));
        let basis: Vec<String> = d.space(k).iter().map(|e| alg.render(e)).collect();
        spaces.push(Value::from(format!("{root}: span{{{}}}", basis.join(", "))));
    }
    let h: Vec<String> = d.pair().h_basis().iter().map(|e| alg.render(e)).collect();
    r.push(
        Check::pass("decompose.roots")
            .detail("h_basis", h.into_iter().map(Value::from).collect::<Vec<_>>())
            .detail("roots", roots)
            .detail("dims", dims)
            .detail("spaces", spaces),
    );
    r.extend(verify_toral(&d));
    if partial {
        r.extend(check_partial_grading(&d));
    }
    Ok(r)
}

fn parse_identity(s: &str) -> Result<IdentityName, String> {
    s.parse::<IdentityName>().map_err(|e| e.to_string())
}

fn cocycle(rank: usize, entries: Option<&[String]>) -> Result<Cocycle, String> {
    match entries {
        None => Ok(Cocycle::trivial(rank)),
        Some(e) => {
            let q = e
                .iter()
                .map(|s| s.trim().parse::<Rat>().map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            Cocycle::from_flat(rank, &q).map_err(|e| e.to_string())
        }
    }
}

fn execute(command: &Command) -> (String, Subject, CheckReport) {
    let mut subject = Subject::new();
    let name = match command {
        Command::Identities { .. } => "identities",
        Command::Form { .. } => "form",
        Command::Decompose { .. } => "decompose",
        Command::Eaa { .. } => "eaa",
        Command::Core { .. } => "core",
        Command::Affinize { .. } => "affinize",
        Command::Obstruction { .. } => "obstruction",
    };
    let src = match command {
        Command::Identities { subject, .. }
        | Command::Form { subject }
        | Command::Decompose { subject, .. }
        | Command::Eaa { subject, .. }
        | Command::Core { subject, .. }
        | Command::Affinize { subject, .. }
        | Command::Obstruction { subject } => subject.clone(),
    };
    subject.insert("source".into(), src.clone().into());
    let doc = match load(&src) {
        Ok(d) => d,
        Err(e) => return (name.into(), subject, refused(name, e)),
    };
    subject.insert("algebra".into(), doc.algebra.name().into());
    let result: Result<CheckReport, String> = match command {
        Command::Identities {
            identity,
            mode,
            seed,
            count,
            ..
        } => (|| {
            let id = parse_identity(identity)?;
            let spec = IdentitySpec::new(id);
            let mode = match mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Sampled => Mode::Sampled {
                    seed: *seed,
                    count: *count,
                },
                ModeArg::Auto if spec.multilinear => Mode::Exhaustive,
                ModeArg::Auto => Mode::Sampled {
                    seed: *seed,
                    count: *count,
                },
            };
            subject.insert("identity".into(), id.as_str().into());
            match mode {
                Mode::Exhaustive => {
                    subject.insert("mode".into(), "exhaustive".into());
                }
                Mode::Sampled { seed, count } => {
                    subject.insert("mode".into(), "sampled".into());
                    subject.insert("seed".into(), seed.into());
                    subject.insert("count".into(), count.into());
                }
            }
            let c = check_identity(&doc.algebra, &spec, mode).map_err(|e| e.to_string())?;
            Ok(CheckReport::from_iter([c]))
        })(),
        Command::Form { .. } => check_form(&doc.algebra).map_err(|e| e.to_string()),
        Command::Decompose { partial_grading, .. } => {
            decompose_report(&doc, *partial_grading).map_err(|e| e.to_string())
        }
        Command::Eaa { search, .. } => {
            subject.insert("budget".into(), search.budget.into());
            subject.insert("seed".into(), search.seed.into());
            quadratic(&doc)
                .map(|q| check_eaa(&q, &search.search()))
                .map_err(|e| e.to_string())
        }
        Command::Core { search, .. } => {
            subject.insert("budget".into(), search.budget.into());
            subject.insert("seed".into(), search.seed.into());
            quadratic(&doc)
                .and_then(|q| verify_core_pair(&q, &search.search()))
                .map(|(_, r)| r)
                .map_err(|e| e.to_string())
        }
        Command::Affinize {
            flavor,
            rank,
            cocycle: q,
            box_k,
            check,
            search,
            ..
        } => (|| {
            let lam = cocycle(*rank, q.as_deref())?;
            let flavor = Flavor::from(*flavor);
            subject.insert("flavor".into(), flavor.as_str().into());
            subject.insert("rank".into(), (*rank).into());
            let qs: Vec<Value> = lam.matrix().iter().flatten().map(|r| Value::from(*r)).collect();
            subject.insert("cocycle".into(), qs.into());
            subject.insert("box".into(), (*box_k as u64).into());
            subject.insert("check".into(), check.as_str().into());
            let la = LoopAlgebra::new(doc.algebra.clone(), lam, flavor).map_err(|e| e.to_string())?;
            if check == "eaa" {
                subject.insert("budget".into(), search.budget.into());
                subject.insert("seed".into(), search.seed.into());
                let q = quadratic(&doc).map_err(|e| e.to_string())?;
                check_eaa_loop(&la, &q, *box_k, &search.search()).map_err(|e| e.to_string())
            } else {
                let spec = IdentitySpec::new(parse_identity(check)?);
                check_loop_identity(&la, &spec, *box_k)
                    .map(|c| CheckReport::from_iter([c]))
                    .map_err(|e| e.to_string())
            }
        })(),
        Command::Obstruction { .. } => malcev_obstruction(&doc.algebra)
            .map(|o| o.report)
            .map_err(|e| e.to_string()),
    };
    let report = result.unwrap_or_else(|e| refused(name, e));
    (name.into(), subject, report)
}

/// Parses `args`, runs the command and prints the report. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return 3;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let start = Instant::now();
    let (name, subject, checks) = execute(&cli.command);
    let mut report = Report::new(&name, subject, checks);
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    for c in &report.checks {
        if c.status == Status::Refused {
            if let Some(Value::Text(r)) = c.details.get("reason") {
                eprintln!("refused: {}: {r}", c.name);
            }
        }
    }
    match cli.format {
        OutputFormat::Human => print!("{}", report.to_human()),
        OutputFormat::Json => print!("{}", report.to_json()),
    }
    report.exit_code
}
