use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vabelian::counter::{CounterMachine, RunOutcome};
use vabelian::geodesic::{BallTable, PatternCriterion};
use vabelian::growth::{classify_growth, fit_rational_series, geodesic_counts, growth_rate_estimate, Census, Growth, DEFAULT_EPSILON};
use vabelian::machine::{windowed_decomposition, Decomposition, GeodesicMachine};
use vabelian::path::Gamma;
use vabelian::shuffle::{AlphabetYP, PatternedWord};
use vabelian::{GroupSpec, Word};

/// Geodesics, growth and counter machines for virtually abelian groups.
#[derive(Parser)]
#[command(name = "vabelian", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a group file; exit 3 if it breaks an invariant.
    Validate {
        #[command(flatten)]
        group: GroupArg,
        /// Weight bound for the generation check.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Print the normal form and weight of a word.
    Eval(WordArgs),
    /// Run the shuffling algorithm and print its trace.
    Shuffle(WordArgs),
    /// Exit 0 if the word is geodesic, 1 if not.
    Geodesic {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_enum, default_value_t = Method::Pattern)]
        method: Method,
    },
    /// Count geodesic words by weight.
    Growth {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        max_weight: u64,
        /// Write the table here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Pattern)]
        method: Method,
    },
    /// The graph whose paths encode words.
    Gamma {
        #[command(subcommand)]
        command: GammaCommand,
    },
    /// Blind counter machines for the language of geodesics.
    Machine {
        #[command(subcommand)]
        command: MachineCommand,
    },
}

#[derive(Subcommand)]
enum GammaCommand {
    /// Write the part of the graph reachable from the start vertices.
    Export {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        dot: PathBuf,
        #[arg(long, default_value_t = 5000)]
        max_vertices: usize,
    },
}

#[derive(Subcommand)]
enum MachineCommand {
    /// Build a machine from a decomposition and write it out.
    Build {
        #[command(flatten)]
        group: GroupArg,
        /// `windowed:W` or `file:PATH`.
        #[arg(long)]
        decomposition: String,
        #[arg(long)]
        out: PathBuf,
        /// Also write a DOT rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        max_states: usize,
    },
    /// Run a machine file on a word; exit 0 on accept, 1 on reject.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        word: String,
        /// Configurations to expand before giving up.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
}

#[derive(Args)]
struct GroupArg {
    /// Group specification file.
    #[arg(long)]
    group: PathBuf,
}

#[derive(Args)]
struct WordArgs {
    #[command(flatten)]
    group: GroupArg,
    /// Letters separated by spaces, or run together when labels are one
    /// character long.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Brute-force ball of the word's weight.
    Oracle,
    /// The pattern criterion.
    Pattern,
    /// Both, failing if they disagree.
    Both,
}

/// A failure with its exit status.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(3, e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(3, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(3, format!("{}: {e}", path.display())))
}

fn load(arg: &GroupArg) -> Result<GroupSpec, Failure> {
    let spec = GroupSpec::parse(&read(&arg.group)?).map_err(|e| Failure(3, format!("{}: {e}", arg.group.display())))?;
    let report = spec.validate();
    if !report.is_valid() {
        let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Failure(3, format!("{}: invalid group\n{}", arg.group.display(), lines.join("\n"))));
    }
    Ok(spec)
}

fn load_word(args: &WordArgs) -> Result<(GroupSpec, Word), Failure> {
    let spec = load(&args.group)?;
    let word = spec.parse_word(&args.word)?;
    Ok((spec, word))
}

fn validate(group: &GroupArg, bound: Option<u64>) -> Outcome {
    let spec = GroupSpec::parse(&read(&group.group)?).map_err(|e| Failure(3, format!("{}: {e}", group.group.display())))?;
    let report = match bound {
        Some(b) => spec.validate_with_bound(b),
        None => spec.validate(),
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.is_valid() {
        println!("valid: {} (rank {}, index {})", spec.name(), spec.rank(), spec.index());
        return Ok(true);
    }
    let lines: Vec<String> = report.violations.iter().map(|v| format!("invalid: {v}")).collect();
    Err(Failure(3, lines.join("\n")))
}

fn eval(args: &WordArgs) -> Outcome {
    let (spec, w) = load_word(args)?;
    println!("{}", spec.evaluate(&w));
    println!("weight: {}", spec.word_weight(&w));
    Ok(true)
}

fn shuffle(args: &WordArgs) -> Outcome {
    let (spec, w) = load_word(args)?;
    let yp = AlphabetYP::build(&spec);
    let (pw, trace) = yp.shuffle(&w);
    for (i, step) in trace.steps.iter().enumerate() {
        let u: Vec<String> = step.u.iter().map(ToString::to_string).collect();
        println!("{i}: u = ({}) pattern = {} rest = {}", u.join(" "), yp.format_pattern(&step.pattern), spec.format_word(&step.rest));
        if let Some(mv) = trace.moves.get(i) {
            println!("   delta({}, {}) = {}", yp.format_pattern(&mv.pattern), spec.format_word(&mv.from), yp.format_delta(&mv.delta));
        }
    }
    let v: Vec<String> = pw.v.iter().map(ToString::to_string).collect();
    println!("pattern: {}", yp.format_pattern(&pw.pattern));
    println!("v: {}", v.join(" "));
    Ok(true)
}

fn geodesic(args: &WordArgs, method: Method) -> Outcome {
    let (spec, w) = load_word(args)?;
    let oracle = || -> Result<bool, Failure> { Ok(BallTable::build(&spec, spec.word_weight(&w)).is_geodesic(&spec, &w)?) };
    let pattern = || -> Result<(bool, Option<String>), Failure> {
        let yp = AlphabetYP::build(&spec);
        let c = PatternCriterion::new(&yp);
        let pw = yp.shuffle_only(&w);
        let witness = c.witness(&pw)?;
        let shorter = match &witness {
            Some(wit) => Some(spec.format_word(&yp.expand(&PatternedWord { pattern: wit.pattern.clone(), v: wit.u.clone() })?)),
            None => None,
        };
        Ok((witness.is_none(), shorter))
    };
    let (verdict, shorter) = match method {
        Method::Oracle => (oracle()?, None),
        Method::Pattern => pattern()?,
        Method::Both => {
            let a = oracle()?;
            let (b, shorter) = pattern()?;
            if a != b {
                return Err(Failure(3, format!("methods disagree: oracle {a}, pattern {b}")));
            }
            (a, shorter)
        }
    };
    if verdict {
        println!("geodesic");
    } else {
        println!("not geodesic");
        if let Some(s) = shorter {
            println!("shorter: {s}");
        }
    }
    Ok(verdict)
}

fn growth(group: &GroupArg, max_weight: u64, csv: Option<&Path>, method: Method) -> Outcome {
    let spec = load(group)?;
    let yp = AlphabetYP::build(&spec);
    let criterion = PatternCriterion::new(&yp);
    let table = match method {
        Method::Pattern => geodesic_counts(Census::Pattern(&criterion), max_weight)?,
        Method::Oracle | Method::Both => {
            let ball = BallTable::build(&spec, max_weight);
            let t = geodesic_counts(Census::Oracle(&spec, &ball), max_weight)?;
            if method == Method::Both && geodesic_counts(Census::Pattern(&criterion), max_weight)? != t {
                return Err(Failure(3, "methods disagree".into()));
            }
            t
        }
    };
    let mut summary = vec![format!("horizon: {max_weight}")];
    match growth_rate_estimate(&table) {
        Ok(e) => summary.push(format!(
            "rate: ratio {} ({:.4}), root {:.4}{}",
            e.ratio,
            e.ratio_f64(),
            e.root,
            if e.agree { "" } else { ", estimates disagree" }
        )),
        Err(e) => summary.push(format!("rate: {e}")),
    }
    let class = match classify_growth(&table, DEFAULT_EPSILON) {
        Growth::Polynomial { sphere_degree } => format!("polynomial (sphere degree {sphere_degree}, cumulative degree {})", sphere_degree + 1),
        Growth::Exponential { ratio } => format!("exponential (ratio {ratio:.4})"),
        Growth::Inconclusive => "inconclusive".into(),
    };
    summary.push(format!("class (heuristic): {class}"));
    match fit_rational_series(&table, 8) {
        Some(f) => {
            let show = |v: &[_]| v.iter().map(ToString::to_string).collect::<Vec<String>>().join(" ");
            summary.push(format!("fit: order {}, numerator [{}], denominator [{}]", f.order, show(&f.numerator), show(&f.denominator)));
        }
        None => summary.push("fit: none within order 8".into()),
    }
    match csv {
        Some(path) => {
            write(path, &table.to_csv())?;
            summary.iter().for_each(|l| println!("{l}"));
        }
        None => {
            print!("{}", table.to_csv());
            summary.iter().for_each(|l| eprintln!("{l}"));
        }
    }
    Ok(true)
}

fn gamma_export(group: &GroupArg, dot: &Path, max_vertices: usize) -> Outcome {
    let spec = load(group)?;
    let yp = AlphabetYP::build(&spec);
    let g = Gamma::new(&yp);
    let sub = g.explore(max_vertices)?;
    write(dot, &g.to_dot(&sub))?;
    println!("{} vertices, {} edges{}", sub.vertices.len(), sub.edges.len(), if sub.truncated { " (truncated)" } else { "" });
    Ok(true)
}

fn machine_build(group: &GroupArg, source: &str, out: &Path, dot: Option<&Path>, max_states: usize) -> Outcome {
    let spec = load(group)?;
    let yp = AlphabetYP::build(&spec);
    let dec = match source.split_once(':') {
        Some(("windowed", w)) => {
            let w = w.parse().map_err(|_| Failure(2, format!("bad window `{w}`")))?;
            windowed_decomposition(&PatternCriterion::new(&yp), w)?
        }
        Some(("file", p)) => {
            let path = Path::new(p);
            Decomposition::parse(&yp, &read(path)?).map_err(|e| Failure(3, format!("{}: {e}", path.display())))?
        }
        _ => return Err(Failure(2, "--decomposition is windowed:W or file:PATH".into())),
    };
    let machine = GeodesicMachine::build(&yp, dec, None)?.to_counter_machine(max_states)?;
    write(out, &machine.to_text())?;
    if let Some(dot) = dot {
        write(dot, &machine.to_dot())?;
    }
    println!("{} states, {} transitions, {} counters", machine.states().len(), machine.transitions().len(), machine.counters());
    Ok(true)
}

fn machine_run(path: &Path, word: &str, budget: usize) -> Outcome {
    let m = CounterMachine::parse(&read(path)?).map_err(|e| Failure(3, format!("{}: {e}", path.display())))?;
    let w = m.parse_word(word)?;
    if !m.in_window(&w) {
        println!("reject: outside certified window");
        return Ok(false);
    }
    match m.run_bounded(&w, budget) {
        RunOutcome::Accept => {
            println!("accept");
            Ok(true)
        }
        RunOutcome::Reject => {
            println!("reject");
            Ok(false)
        }
        RunOutcome::BudgetExhausted => Err(Failure(3, format!("no verdict within {budget} configurations"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { group, bound } => validate(group, *bound),
        Command::Eval(w) => eval(w),
        Command::Shuffle(w) => shuffle(w),
        Command::Geodesic { word, method } => geodesic(word, *method),
        Command::Growth { group, max_weight, csv, method } => growth(group, *max_weight, csv.as_deref(), *method),
        Command::Gamma { command: GammaCommand::Export { group, dot, max_vertices } } => gamma_export(group, dot, *max_vertices),
        Command::Machine { command } => match command {
            MachineCommand::Build { group, decomposition, out, dot, max_states } => {
                machine_build(group, decomposition, out, dot.as_deref(), *max_states)
            }
            MachineCommand::Run { machine, word, budget } => machine_run(machine, word, *budget),
        },
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
