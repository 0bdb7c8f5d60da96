//! The `reflectomap` command surface. Every subcommand prints one JSON
//! report; the exit code is 0 on pass, 1 on a failed check and 2 on usage,
//! spec or input errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use reflectomap::algebra::{RatFn, Rational, Symbol};
use reflectomap::expr::{digest_inputs, load_map_spec, MapSpec, Report};
use reflectomap::folding::{
    check_constraints_with, discover, regression_table2, regression_table3,
    regression_table3_numeric, verify_solution, FoldingSolution,
};
use reflectomap::transfer::{check_commutativity, transfer_chain, THREADING_NOTE};
use reflectomap::ybmaps::{
    builtin_family, check_involutive_reflection, check_pi_symmetry, check_reflection,
    check_reversibility, check_yang_baxter, CheckOptions, CheckReport, FamilyId, Method,
    ReflectionMap, Status, YangBaxterMap,
};
use reflectomap::Error;

pub const THREADS_VAR: &str = "REFLECTOMAP_THREADS";

#[derive(Parser, Debug)]
#[command(name = "reflectomap", version, about = "Yang-Baxter and reflection map checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// exact or randomized
    #[arg(long, default_value = "exact")]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per randomized check.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Include per-check timings in the report.
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn options(&self) -> CheckOptions {
        match self.method {
            Method::Exact => CheckOptions { seed: self.seed, ..CheckOptions::exact() },
            Method::Randomized => CheckOptions::randomized(self.trials, self.seed),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Table {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Yang-Baxter equation, reversibility and pi-symmetry of a map.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: Option<FamilyId>,
        /// A `yang_baxter` map-spec file.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Comma-separated subset of yb, reversibility, pi.
        #[arg(long, default_value = "yb,reversibility,pi")]
        checks: String,
    },
    /// The reflection equation for a reflection map (identity by default).
    Reflect {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: Option<FamilyId>,
        /// A `reflection` map-spec file.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Value substituted for `mu`.
        #[arg(long)]
        mu: Option<Rational>,
    },
    /// Regression of the shipped classification tables, or one folding solution.
    Fold {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: Option<FamilyId>,
        #[arg(long, value_enum, default_value = "all")]
        table: Table,
        /// A `reflection` map-spec file with a `phi` field.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Random involutions per degenerate row with `--method randomized`.
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Numerical search for non-degenerate reflection maps on a mu-slice.
    Discover {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: FamilyId,
        #[arg(long)]
        mu: Rational,
        /// Number of restarts.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Commutativity of the transfer maps on an N-site lattice.
    Transfer {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: FamilyId,
        /// A `reflection` map-spec used for both boundaries (identity by default).
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        sites: usize,
        #[arg(long)]
        mu: Option<Rational>,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let args: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match threads() {
        Ok(Some(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command, &args)),
            Err(e) => Outcome::usage(e),
        },
        Ok(None) => execute(cli.command, &args),
        Err(msg) => Outcome::usage(msg),
    }
}

fn threads() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got `{v}`")),
        },
    }
}

fn execute(command: Command, args: &[String]) -> Outcome {
    let (report, timings) = match build_report(command, args) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    Outcome {
        code: if report.overall() == Status::Pass { 0 } else { 1 },
        stdout: report.to_json(timings) + "\n",
        stderr: String::new(),
    }
}

fn read(path: &Path) -> Result<(MapSpec, String), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok((load_map_spec(path)?, text))
}

fn digest(args: &[String], files: &[String]) -> String {
    digest_inputs(args.iter().chain(files))
}

fn family_map(family: Option<FamilyId>, spec: Option<&MapSpec>) -> Result<YangBaxterMap, Error> {
    match family.or_else(|| spec.and_then(|s| s.family)) {
        Some(f) => builtin_family(f),
        None => Err(Error::InvalidArgument("--family is required".into())),
    }
}

fn mu_bindings(mu: &Option<Rational>) -> Vec<(Symbol, RatFn)> {
    mu.iter().map(|m| (Symbol::MU, RatFn::constant(m.clone()))).collect()
}

fn named(r: CheckReport, prefix: &str) -> CheckReport {
    let n = format!("{prefix}: {}", r.check_name);
    r.renamed(n)
}

fn build_report(command: Command, args: &[String]) -> Result<(Report, bool), Error> {
    match command {
        Command::Verify { common, family, map, checks } => {
            let (yb, files, label) = match (&family, &map) {
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidArgument("give either --family or --map".into()))
                }
                (Some(f), None) => (builtin_family(*f)?, vec![], f.name().to_string()),
                (None, Some(p)) => {
                    let (spec, text) = read(p)?;
                    let label = if spec.name.is_empty() { p.display().to_string() } else { spec.name.clone() };
                    (spec.to_yang_baxter()?, vec![text], label)
                }
                (None, None) => return Err(Error::InvalidArgument("--family or --map is required".into())),
            };
            let opts = common.options();
            let mut report = Report::new("verify", digest(args, &files), common.seed);
            for c in checks.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                let r = match c {
                    "yb" | "yang_baxter" => check_yang_baxter(&yb, &opts),
                    "reversibility" => check_reversibility(&yb, &opts),
                    "pi" | "pi_symmetry" => check_pi_symmetry(&yb, &opts),
                    other => return Err(Error::InvalidArgument(format!("unknown check `{other}`"))),
                };
                report.push(named(r, &label));
            }
            Ok((report, common.timings))
        }
        Command::Reflect { common, family, map, mu } => {
            let opts = common.options();
            let bind = mu_bindings(&mu);
            let (spec, files) = match &map {
                Some(p) => {
                    let (s, t) = read(p)?;
                    (Some(s), vec![t])
                }
                None => (None, vec![]),
            };
            let yb = family_map(family, spec.as_ref())?;
            let mut report = Report::new("reflect", digest(args, &files), common.seed);
            let (refl, label) = match &spec {
                Some(s) => {
                    let r = s.to_reflection()?.specialize(&bind)?;
                    let label = if r.name.is_empty() { "reflection map".to_string() } else { r.name.clone() };
                    (r, label)
                }
                None => (ReflectionMap::identity(), "identity".to_string()),
            };
            if let Some(s) = spec.as_ref().filter(|s| s.phi().is_some()) {
                let mut sol = FoldingSolution::from_spec(s)?.specialize(&bind)?;
                sol.family = yb.family;
                report.push(check_constraints_with(&yb, &sol, &opts));
            }
            report.push(named(check_involutive_reflection(&refl, &opts), &label));
            report.push(named(check_reflection(&yb, &refl, &opts), &label));
            Ok((report, common.timings))
        }
        Command::Fold { common, family, table, map, count } => {
            let opts = common.options();
            if let Some(p) = &map {
                let (spec, text) = read(p)?;
                let mut sol = FoldingSolution::from_spec(&spec)?;
                if let Some(f) = family {
                    sol.family = f;
                }
                let mut report = Report::new("fold", digest(args, &[text]), common.seed);
                for r in verify_solution(&sol, &opts) {
                    report.push(r);
                }
                return Ok((report, common.timings));
            }
            let families: Vec<FamilyId> = match family {
                Some(f) => vec![f],
                None => FamilyId::BUILTIN.to_vec(),
            };
            let mut report = Report::new("fold", digest(args, &[]), common.seed);
            for f in families {
                if matches!(table, Table::Two | Table::All) {
                    regression_table2(f).into_iter().for_each(|r| report.push(r));
                }
                if matches!(table, Table::Three | Table::All) {
                    regression_table3(f).into_iter().for_each(|r| report.push(r));
                    if common.method == Method::Randomized {
                        regression_table3_numeric(f, count, common.trials, common.seed)
                            .into_iter()
                            .for_each(|r| report.push(r));
                    }
                }
            }
            Ok((report, common.timings))
        }
        Command::Discover { common, family, mu, budget } => {
            let d = discover(family, &mu, common.seed, budget)?;
            let mut report = Report::new("discover", digest(args, &[]), common.seed);
            for s in &d.solutions {
                let r = CheckReport::new(format!("discovered: {}", s.label), Status::Pass, Method::Exact)
                    .with_note("constraints and reflection equation verified exactly");
                report.push(r);
            }
            report.data = Some(d.to_json());
            Ok((report, common.timings))
        }
        Command::Transfer { common, family, map, sites, mu } => {
            let yb = builtin_family(family)?;
            let bind = mu_bindings(&mu);
            let (refl, files) = match &map {
                Some(p) => {
                    let (s, t) = read(p)?;
                    (s.to_reflection()?.specialize(&bind)?, vec![t])
                }
                None => (ReflectionMap::identity(), vec![]),
            };
            let chains: Vec<String> = (1..=sites)
                .map(|j| {
                    transfer_chain(j, sites).map(|mut c| {
                        c.reverse();
                        let f: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                        format!("T{j} = {}", f.join(" "))
                    })
                })
                .collect::<Result<_, _>>()?;
            let mut report = Report::new("transfer", digest(args, &files), common.seed);
            report.push(named(
                check_commutativity(&yb, &refl, &refl, sites, common.trials, common.seed),
                family.name(),
            ));
            report.data = Some(serde_json::json!({
                "family": family,
                "sites": sites,
                "boundary": if refl.name.is_empty() { "reflection map".to_string() } else { refl.name.clone() },
                "transfer_maps": chains,
                "convention": THREADING_NOTE,
            }));
            Ok((report, common.timings))
        }
    }
}
