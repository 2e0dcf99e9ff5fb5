//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::criterion::{
    assess, assess_adaptive, counterexample_family, family_c, family_g, scan_grassmannian,
    scan_problem, Assertions, ScanOptions, TreePolicy,
};
use crate::error::{Error, Result};
use crate::partition::{enumerate_problems, GrassmannianShape, SchubertProblem};
use crate::permgroup::{exceptional_group, factor_surjective, goursat_experiment, subset_action};
use crate::puzzle::{lr_coefficient, problem_degree};
use crate::report::{
    parse_partition, parse_problem, parse_shape, scan_report, scan_summary, status_meaning,
    verdict_report, Format, Report,
};
use crate::tableau::degree_oracle;
use crate::tree::{build_tree_with_budget, DEFAULT_VERTEX_BUDGET};

/// Shapes with more problems than this need the slow-suite flag to scan.
pub const SLOW_SCAN_THRESHOLD: usize = 5000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "schubert",
    version,
    about = "Schubert problems, puzzles and Galois group certificates"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    pub format: FormatArg,

    /// Write the report to this file.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Directory for reports when no output file is given.
    #[arg(long, env = "SCHUBERT_OUTPUT_DIR", global = true)]
    pub output_dir: Option<PathBuf>,

    /// Worker threads.
    #[arg(long, env = "SCHUBERT_THREADS", global = true)]
    pub threads: Option<usize>,

    /// Allow slow census runs.
    #[arg(long, env = "SCHUBERT_SLOW", global = true,
          value_parser = clap::builder::FalseyValueParser::new())]
    pub slow: bool,

    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Adaptive,
    Fixed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    /// Four K x (N-K) rectangles on G(2K,2N).
    C,
    /// Three ((2(N-K))^K,(N-K)^K) on G(3K,3N).
    G,
    /// (m^m) (1)^(k^2-m^2) on G(k,2k); arguments are k and m.
    Counterexample,
}

#[derive(Args, Debug, Clone)]
pub struct CriterionArgs {
    /// Tree policy.
    #[arg(long, value_enum, default_value_t = PolicyArg::Adaptive)]
    pub policy: PolicyArg,

    /// Condition orderings tried under the fixed policy.
    #[arg(long, default_value_t = 1)]
    pub budget: usize,

    /// Problem asserted to have a two-transitive Galois group (repeatable).
    #[arg(long = "assert", value_name = "PROBLEM")]
    pub assertions: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum CommandArgs {
    /// Littlewood-Richardson coefficient c^gamma_{alpha,beta} by puzzles.
    Lr {
        shape: String,
        alpha: String,
        beta: String,
        gamma: String,
    },
    /// Number of solutions of a zero-dimensional problem.
    Degree {
        shape: String,
        problem: String,
        /// Also compute the tableau count and compare.
        #[arg(long)]
        check: bool,
    },
    /// The choice tree of a problem, conditions folded in the given order.
    Tree {
        shape: String,
        problem: String,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
        vertex_budget: usize,
    },
    /// The at-least-alternating criterion for one problem.
    Criterion {
        shape: String,
        problem: String,
        #[command(flatten)]
        criterion: CriterionArgs,
    },
    /// Run the criterion on every zero-dimensional problem of a Grassmannian.
    Scan {
        shape: String,
        #[command(flatten)]
        criterion: CriterionArgs,
        /// Only problems not induced from a smaller Grassmannian.
        #[arg(long)]
        primitive_only: bool,
    },
    /// Construct a member of one of the example families.
    Family {
        #[arg(value_enum)]
        kind: FamilyKind,
        /// N, or k for the counterexample family.
        a: usize,
        /// K, or m for the counterexample family.
        b: usize,
        /// Also run the criterion.
        #[arg(long)]
        criterion: bool,
    },
    /// Permutation group experiments.
    #[command(subcommand)]
    GroupExperiment(GroupArgs),
}

#[derive(Subcommand, Debug)]
pub enum GroupArgs {
    /// Join A_m x A_n with random (or all) tau and test transitive results.
    Goursat {
        m: usize,
        n: usize,
        /// Random samples; all of S_{m+n} when omitted.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// (S_n x S_n) extended by the block swap.
    Exceptional { n: usize },
    /// S_N acting on K-subsets.
    Subset { big_n: usize, big_k: usize },
}

/// Validated configuration for one run.
#[derive(Debug)]
pub struct RunConfig {
    pub command: CommandArgs,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: usize,
    pub slow_suite: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let threads = match cli.threads {
            Some(0) => return Err(Error::Parameter("thread count must be at least 1".into())),
            Some(t) => t,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if let CommandArgs::Criterion {
            criterion: args, ..
        }
        | CommandArgs::Scan {
            criterion: args, ..
        } = &cli.command
        {
            if args.budget == 0 {
                return Err(Error::Parameter(
                    "ordering budget must be at least 1".into(),
                ));
            }
            if args.policy == PolicyArg::Adaptive && args.budget != 1 {
                return Err(Error::Parameter(
                    "--budget applies to the fixed policy only".into(),
                ));
            }
        }
        let format = match cli.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        };
        let output = cli.output.or_else(|| {
            cli.output_dir.map(|d| {
                d.join(format!(
                    "{}.{}",
                    default_name(&cli.command),
                    format.extension()
                ))
            })
        });
        Ok(RunConfig {
            command: cli.command,
            format,
            output,
            threads,
            slow_suite: cli.slow,
        })
    }
}

fn default_name(c: &CommandArgs) -> String {
    let clean = |s: &str| -> String {
        s.chars()
            .filter(|c| c.is_ascii_alphanumeric() || *c == ',')
            .map(|c| if c == ',' { '-' } else { c })
            .collect()
    };
    match c {
        CommandArgs::Lr { shape, .. } => format!("lr-{}", clean(shape)),
        CommandArgs::Degree { shape, .. } => format!("degree-{}", clean(shape)),
        CommandArgs::Tree { shape, .. } => format!("tree-{}", clean(shape)),
        CommandArgs::Criterion { shape, .. } => format!("criterion-{}", clean(shape)),
        CommandArgs::Scan { shape, .. } => format!("scan-{}", clean(shape)),
        CommandArgs::Family { kind, a, b, .. } => format!("family-{kind:?}-{a}-{b}").to_lowercase(),
        CommandArgs::GroupExperiment(_) => "group-experiment".into(),
    }
}

/// Result of a run: a summary for the terminal and a report.
#[derive(Debug)]
pub struct Outcome {
    pub summary: String,
    pub report: Report,
}

fn policy(p: PolicyArg) -> TreePolicy {
    match p {
        PolicyArg::Adaptive => TreePolicy::Adaptive,
        PolicyArg::Fixed => TreePolicy::Fixed,
    }
}

fn assertions(shape: GrassmannianShape, texts: &[String]) -> Result<Assertions> {
    texts.iter().map(|t| parse_problem(t, shape)).collect()
}

fn criterion_outcome(problem: &SchubertProblem, args: &CriterionArgs) -> Result<Outcome> {
    let asserted = assertions(problem.shape(), &args.assertions)?;
    let policy = policy(args.policy);
    let a = match policy {
        TreePolicy::Adaptive => assess_adaptive(problem, &asserted)?,
        TreePolicy::Fixed => {
            let record = scan_problem(problem, &asserted, args.budget)?;
            let best = record
                .per_ordering
                .iter()
                .find(|(_, s)| *s == record.status)
                .map(|(o, _)| o.clone())
                .unwrap_or_else(|| problem.clone());
            assess(&best, &asserted)?
        }
    };
    let mut summary = format!(
        "{}: {} ({})",
        problem,
        a.status.as_str(),
        status_meaning(a.status)
    );
    if let Some(w) = &a.witness {
        summary.push_str(&format!("\n  {}", w.describe()));
    }
    Ok(Outcome {
        summary,
        report: verdict_report(problem, policy, &a),
    })
}

/// Executes a configured command.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        CommandArgs::Lr {
            shape,
            alpha,
            beta,
            gamma,
        } => {
            let shape = parse_shape(shape)?;
            let (a, b, g) = (
                parse_partition(alpha)?,
                parse_partition(beta)?,
                parse_partition(gamma)?,
            );
            let c = lr_coefficient(&a, &b, &g, shape)?;
            let report = Report::new("lr")
                .field("shape", shape.to_string())
                .field("alpha", a.to_string())
                .field("beta", b.to_string())
                .field("gamma", g.to_string())
                .field("coefficient", c.to_string());
            Ok(Outcome {
                summary: c.to_string(),
                report,
            })
        }
        CommandArgs::Degree {
            shape,
            problem,
            check,
        } => {
            let q = parse_problem(problem, parse_shape(shape)?)?;
            let d = problem_degree(&q)?;
            let mut report = Report::new("degree")
                .field("shape", q.shape().to_string())
                .field("problem", q.conditions_string())
                .field("degree", d.to_string());
            if *check {
                let oracle = degree_oracle(&q)?;
                if oracle != d {
                    return Err(Error::Internal(format!(
                        "puzzle degree {d} differs from tableau degree {oracle} for {q}"
                    )));
                }
                report = report.field("tableau-degree", oracle.to_string());
            }
            Ok(Outcome {
                summary: d.to_string(),
                report,
            })
        }
        CommandArgs::Tree {
            shape,
            problem,
            vertex_budget,
        } => {
            let q = parse_problem(problem, parse_shape(shape)?)?;
            let tree = build_tree_with_budget(&q, *vertex_budget)?;
            tree.audit()?;
            let profile: Vec<String> = tree
                .bifurcation_profile()
                .iter()
                .map(|(l, r)| format!("({l},{r})"))
                .collect();
            let mut report = Report::new("tree")
                .field("shape", q.shape().to_string())
                .field("problem", q.conditions_string())
                .field("leaves", tree.leaf_count().to_string())
                .field("vertices", tree.len())
                .field("profile", profile.join(" "));
            match config.format {
                Format::Text => {
                    for line in tree.to_text().lines() {
                        report.record(line.to_string(), json!(null));
                    }
                }
                Format::Json => report.record(String::new(), tree.to_json()),
            }
            Ok(Outcome {
                summary: format!(
                    "{q}: {} leaves, {} vertices, profile {}",
                    tree.leaf_count(),
                    tree.len(),
                    profile.join(" ")
                ),
                report,
            })
        }
        CommandArgs::Criterion {
            shape,
            problem,
            criterion,
        } => {
            let q = parse_problem(problem, parse_shape(shape)?)?;
            criterion_outcome(&q, criterion)
        }
        CommandArgs::Scan {
            shape,
            criterion,
            primitive_only,
        } => {
            let shape = parse_shape(shape)?;
            let options = ScanOptions {
                policy: policy(criterion.policy),
                ordering_budget: criterion.budget,
                primitive_only: *primitive_only,
                ..ScanOptions::default()
            };
            if !config.slow_suite {
                let count =
                    enumerate_problems(shape, options.min_conditions, *primitive_only).count();
                if count > SLOW_SCAN_THRESHOLD {
                    return Err(Error::Parameter(format!(
                        "{shape} has {count} problems; pass --slow (or set SCHUBERT_SLOW=1) to scan it"
                    )));
                }
            }
            let asserted = assertions(shape, &criterion.assertions)?;
            let scan = scan_grassmannian(shape, &asserted, &options)?;
            Ok(Outcome {
                summary: scan_summary(&scan),
                report: scan_report(&scan),
            })
        }
        CommandArgs::Family {
            kind,
            a,
            b,
            criterion,
        } => {
            let q = match kind {
                FamilyKind::C => family_c(*a, *b)?,
                FamilyKind::G => family_g(*a, *b)?,
                FamilyKind::Counterexample => counterexample_family(*a, *b)?,
            };
            let d = problem_degree(&q)?;
            let mut out = if *criterion {
                criterion_outcome(
                    &q,
                    &CriterionArgs {
                        policy: PolicyArg::Adaptive,
                        budget: 1,
                        assertions: Vec::new(),
                    },
                )?
            } else {
                Outcome {
                    summary: q.to_string(),
                    report: Report::new("family")
                        .field("shape", q.shape().to_string())
                        .field("problem", q.conditions_string()),
                }
            };
            out.summary = format!("{}\ndegree {d}", out.summary);
            out.report = out.report.field("degree", d.to_string());
            Ok(out)
        }
        CommandArgs::GroupExperiment(g) => group_experiment(g),
    }
}

fn group_experiment(g: &GroupArgs) -> Result<Outcome> {
    match g {
        GroupArgs::Goursat {
            m,
            n,
            samples,
            seed,
        } => {
            let r = goursat_experiment(*m, *n, *samples, *seed)?;
            let mut report = Report::new("goursat")
                .field("m", r.m)
                .field("n", r.n)
                .field("relaxed", r.relaxed)
                .field("exhaustive", r.exhaustive)
                .field("tested", r.tested)
                .field("transitive", r.transitive)
                .field("counterexamples", r.counterexamples.len());
            for c in &r.counterexamples {
                report.record(format!("{c:?}"), json!(c));
            }
            Ok(Outcome {
                summary: format!(
                    "({},{}): {} tested, {} transitive, {} counterexamples",
                    r.m,
                    r.n,
                    r.tested,
                    r.transitive,
                    r.counterexamples.len()
                ),
                report,
            })
        }
        GroupArgs::Exceptional { n } => {
            let group = exceptional_group(*n)?;
            let surjective = factor_surjective(&group, *n)?;
            let report = Report::new("exceptional")
                .field("n", *n)
                .field("degree", group.degree())
                .field("order", group.order().to_string())
                .field("transitive", group.is_transitive())
                .field("factor-surjective", surjective)
                .field("at-least-alternating", group.at_least_alternating());
            Ok(Outcome {
                summary: format!(
                    "order {}, transitive {}, factor-surjective {surjective}, at least alternating {}",
                    group.order(),
                    group.is_transitive(),
                    group.at_least_alternating()
                ),
                report,
            })
        }
        GroupArgs::Subset { big_n, big_k } => {
            let group = subset_action(*big_n, *big_k)?;
            let report = Report::new("subset-action")
                .field("N", *big_n)
                .field("K", *big_k)
                .field("degree", group.degree())
                .field("order", group.order().to_string())
                .field("transitive", group.is_transitive())
                .field("two-transitive", group.is_k_transitive(2))
                .field("pair-orbits", group.pair_orbit_count())
                .field("at-least-alternating", group.at_least_alternating());
            Ok(Outcome {
                summary: format!(
                    "degree {}, order {}, transitive {}, two-transitive {}, {} pair orbits",
                    group.degree(),
                    group.order(),
                    group.is_transitive(),
                    group.is_k_transitive(2),
                    group.pair_orbit_count()
                ),
                report,
            })
        }
    }
}

/// Parses arguments, runs, writes the report, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        let outcome = pool.install(|| run(&config))?;
        println!("{}", outcome.summary);
        if let Some(path) = &config.output {
            outcome.report.write(config.format, path)?;
            eprintln!("report written to {}", path.display());
        }
        Ok(())
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_INTERNAL
            }
        }
    }
}
