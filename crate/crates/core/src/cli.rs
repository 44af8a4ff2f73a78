//! The `unionlab` command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::canonical::{
    canonical_system, contains_canonical, default_sizes, labelled_spread, transfer_tmax, verify_level_one_failure,
    weight_tmax, weight_tmin, Containment, Kind, Side, Spread,
};
use crate::decisive_weight::{verify_tort_failure, weight_from_colouring};
use crate::dichotomy::{dichotomy_search, refined_structure, Colouring, DichotomyParams, Outcome, Window};
use crate::error::Error;
use crate::fixtures::{
    section6_build, verify_l_propagation, verify_lemma_6_1, verify_section6_bounds, Section6Config, Which,
};
use crate::io;
use crate::propagation::{propagation_constant, v_value, LogWeight, PropagationLimits, Rational};
use crate::report::{Format, Record, Report, Table};
use crate::setsystem::{
    breadth, cayley_embedding, filter_generated, union_closure, Budget, GroundSet, MultiplicationTable, SetSystem,
    Subfamily,
};
use crate::MemberSet;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Budget(_)) | CliError::File { source: Error::Budget(_), .. } => 3,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "unionlab", version, about = "Exact experiments on union-closed set systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write the report or emitted file here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value = "table")]
    pub format: FormatArg,
    /// Largest family any closure may build.
    #[arg(long, global = true)]
    pub cap_members: Option<usize>,
    /// Node budget for the breadth search.
    #[arg(long, global = true)]
    pub cap_nodes: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Table,
    Csv,
    Keyvalue,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Csv => Format::Csv,
            FormatArg::Keyvalue => Format::KeyValue,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CanonicalKind {
    Tmax,
    Tmin,
    Tort,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeightKind {
    Tmax,
    Tmin,
    Colouring,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VerifyKind {
    Tmax,
    Tmin,
    Tort,
    Section6,
    Lemma61,
    Lprop,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WhichArg {
    S,
    R,
}

/// Where a spread comes from: a file, explicit block sizes or a level count.
#[derive(Debug, Args)]
pub struct SpreadArgs {
    /// Spread file; it needs its own `ground:` line unless a system is given.
    #[arg(short, long)]
    pub spread: Option<PathBuf>,
    /// Block sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Number of levels with sizes 2, 3, ...
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Union closure of the members of a file.
    Closure {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Largest incompressible subfamily.
    Breadth {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Filter generated by the given members.
    Filter {
        #[arg(short, long)]
        input: PathBuf,
        /// A member as space separated labels; repeatable.
        #[arg(long = "member", required = true)]
        members: Vec<String>,
    },
    /// Propagation value of a target from a family.
    Vprop {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        weight: PathBuf,
        #[arg(long = "member", required = true)]
        members: Vec<String>,
        #[arg(long)]
        target: String,
    },
    /// Largest propagation value over subfamilies of a level set.
    Propconst {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        weight: PathBuf,
        #[arg(long)]
        level: String,
        #[arg(long, default_value_t = 4)]
        max_subset: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_subsets: u64,
    },
    /// Canonical system of a spread.
    Canonical {
        kind: CanonicalKind,
        #[command(flatten)]
        spread: SpreadArgs,
    },
    /// Weight on a canonical system.
    Weight {
        kind: WeightKind,
        #[command(flatten)]
        spread: SpreadArgs,
        #[arg(short, long)]
        colouring: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        class: usize,
        /// Also write the system the weight lives on.
        #[arg(long)]
        system_output: Option<PathBuf>,
    },
    /// Bound checks on the canonical systems and the tile fixture.
    Verify {
        kind: VerifyKind,
        #[command(flatten)]
        spread: SpreadArgs,
        #[arg(short, long)]
        colouring: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        class: usize,
        /// First level of the `T_ort` rows.
        #[arg(long)]
        start: Option<usize>,
        #[arg(long)]
        columns: Option<usize>,
        #[arg(long)]
        r_columns: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long, default_value = "s")]
        which: WhichArg,
        #[arg(long, default_value = "1")]
        level: String,
        #[arg(long, default_value_t = 4)]
        max_subset: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_subsets: u64,
    },
    /// Halver search ending in a shattering sequence or a decisive class.
    Dichotomy {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        spread: PathBuf,
        /// `first:last:t`; defaults to every level with t = 1.
        #[arg(long)]
        window: Option<Window>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Spread and transversal extracted from an incompressible chain.
    RefineStructure {
        #[arg(short, long)]
        input: PathBuf,
        /// Chain members in order, as `member:` lines.
        #[arg(long)]
        chain: PathBuf,
        /// Prefix lengths `n_1 < n_2 < ...`; defaults to the squares.
        #[arg(long, value_delimiter = ',')]
        schedule: Vec<usize>,
    },
    /// Builds the tile systems; with `-o DIR` writes their system and weight
    /// files there and prints the summary.
    Section6 {
        #[arg(long)]
        columns: Option<usize>,
        #[arg(long)]
        r_columns: Option<usize>,
    },
    /// Cayley image of a multiplication table.
    Cayley {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Carries a `T_max` spread from a system to the Cayley image of its table.
    TransferTmax {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        spread: PathBuf,
    },
}

/// Text to write and whether every checked property held.
pub struct Verdict {
    pub text: String,
    pub pass: bool,
}

impl Verdict {
    fn ok(text: String) -> Self {
        Verdict { text, pass: true }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let target = match cli.command {
                Command::Section6 { .. } => None,
                _ => cli.common.output.as_deref(),
            };
            if let Err(e) = write_out(target, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file<T>(path: &Path, r: crate::Result<T>) -> Result<T> {
    r.map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn load_system(path: &Path) -> Result<SetSystem> {
    let text = read(path)?;
    in_file(path, io::parse_system(&text))
}

fn load_closed(path: &Path) -> Result<Arc<SetSystem>> {
    let system = load_system(path)?;
    Ok(Arc::new(in_file(path, system.verify_closed())?))
}

fn load_weight(path: &Path, system: Arc<SetSystem>) -> Result<LogWeight> {
    let text = read(path)?;
    in_file(path, io::parse_weight(&text, system))
}

fn load_spread(args: &SpreadArgs, ground: Option<Arc<GroundSet>>) -> Result<Spread> {
    if let Some(path) = &args.spread {
        let text = read(path)?;
        return in_file(
            path,
            match ground {
                Some(g) => io::parse_spread(&text, g),
                None => io::parse_grounded_spread(&text),
            },
        );
    }
    if !args.sizes.is_empty() {
        return Ok(labelled_spread(&args.sizes)?);
    }
    match args.levels {
        Some(levels) => Ok(labelled_spread(&default_sizes(levels))?),
        None => Err(CliError::Usage("give a spread with --spread, --sizes or --levels".into())),
    }
}

fn load_colouring(path: Option<&Path>, ground: Arc<GroundSet>) -> Result<Colouring> {
    match path {
        Some(p) => {
            let text = read(p)?;
            in_file(p, io::parse_colouring(&text, ground))
        }
        None => Ok(Colouring::trivial(ground)),
    }
}

fn parse_member(ground: &GroundSet, labels: &str) -> Result<MemberSet> {
    Ok(ground.set_from_labels(labels.split_whitespace())?)
}

fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid rational {s:?}")))
}

fn budget(common: &Common) -> Budget {
    let mut b = Budget::default();
    if let Some(m) = common.cap_members {
        b.max_members = m;
    }
    if let Some(n) = common.cap_nodes {
        b.max_nodes = n;
    }
    b
}

fn section6_config(columns: Option<usize>, r_columns: Option<usize>) -> Section6Config {
    let mut config = Section6Config::default();
    if let Some(c) = columns {
        config.columns = c;
        config.r_columns = config.r_columns.min(c);
    }
    if let Some(r) = r_columns {
        config.r_columns = r;
    }
    config
}

fn labels_of(ground: &GroundSet, set: &MemberSet) -> String {
    ground.format_labels(set)
}

fn family_labels(system: &SetSystem, family: &Subfamily) -> String {
    family
        .iter()
        .map(|i| system.format_member(i))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn run(cli: &Cli) -> Result<Verdict> {
    let common = &cli.common;
    let format: Format = common.format.into();
    let budget = budget(common);
    match &cli.command {
        Command::Closure { input } => {
            let system = load_system(input)?;
            let gens: Vec<MemberSet> = system.members().collect();
            let closed = union_closure(&gens, system.ground_arc(), &budget)?;
            Ok(Verdict::ok(io::emit_system(&closed)))
        }
        Command::Breadth { input } => {
            let system = load_system(input)?;
            let b = breadth(&system, &budget);
            let mut r = Record::new();
            r.add("members", system.len())
                .add("breadth", b.value)
                .add("exact", b.exact)
                .add("nodes", b.nodes)
                .add("witness", family_labels(&system, &Subfamily::new(b.witness.clone())));
            Ok(Verdict::ok(Report::new().record(r).render(format)))
        }
        Command::Filter { input, members } => {
            let system = load_closed(input)?;
            let family = members
                .iter()
                .map(|m| parse_member(system.ground(), m))
                .collect::<Result<Vec<_>>>()?;
            let filter = filter_generated(&family, &system)?;
            let mut r = Record::new();
            r.add("generators", family.len()).add("filter_size", filter.len());
            let mut t = Table::new(["member"]);
            for i in filter.iter() {
                t.push([system.format_member(i)]);
            }
            Ok(Verdict::ok(Report::new().record(r).table(t).render(format)))
        }
        Command::Vprop {
            input,
            weight,
            members,
            target,
        } => {
            let system = load_closed(input)?;
            let weight = load_weight(weight, Arc::clone(&system))?;
            let family = members
                .iter()
                .map(|m| parse_member(system.ground(), m))
                .collect::<Result<Vec<_>>>()?;
            let family = Subfamily::new(system.indices_of(&family)?);
            let z = parse_member(system.ground(), target)?;
            let zi = system
                .index_of(&z)
                .ok_or_else(|| Error::NotAMember(system.ground().format_set(&z)))?;
            let v = v_value(&family, zi, &weight)?;
            let mut r = Record::new();
            r.add("family", family_labels(&system, &family))
                .add("target", system.format_member(zi))
                .add("weight", weight.value(zi))
                .add("v", v);
            Ok(Verdict::ok(Report::new().record(r).render(format)))
        }
        Command::Propconst {
            input,
            weight,
            level,
            max_subset,
            max_subsets,
        } => {
            let system = load_closed(input)?;
            let weight = load_weight(weight, Arc::clone(&system))?;
            let limits = PropagationLimits {
                max_subset_size: *max_subset,
                max_subsets: *max_subsets,
            };
            let report = propagation_constant(&weight, parse_rational(level)?, &limits)?;
            let mut r = Record::new();
            r.add("level", report.level)
                .add("level_set_size", report.level_set_size)
                .add("subsets_examined", report.subsets_examined)
                .add("pairs_examined", report.pairs_examined)
                .add("max_v", report.max_v.map_or("none".to_string(), |v| v.to_string()))
                .add("exhaustive", report.exhaustive);
            if let Some((family, z)) = &report.witness {
                r.add("witness_family", family_labels(&system, family))
                    .add("witness_target", system.format_member(*z));
            }
            Ok(Verdict::ok(Report::new().record(r).render(format)))
        }
        Command::Canonical { kind, spread } => {
            let spread = load_spread(spread, None)?;
            let system = canonical_system(&spread, kind_of(*kind), &budget)?;
            Ok(Verdict::ok(io::emit_system(&system)))
        }
        Command::Weight {
            kind,
            spread,
            colouring,
            class,
            system_output,
        } => {
            let spread = load_spread(spread, None)?;
            let weight = match kind {
                WeightKind::Tmax => weight_tmax(&spread, &budget)?,
                WeightKind::Tmin => weight_tmin(&spread, &budget)?,
                WeightKind::Colouring => {
                    let colouring = load_colouring(colouring.as_deref(), spread.ground_arc())?;
                    let system = Arc::new(canonical_system(&spread, Kind::Ort, &budget)?);
                    weight_from_colouring(system, &spread, &colouring, *class)?
                }
            };
            if let Some(path) = system_output {
                write_file(path, &io::emit_system(weight.system()))?;
            }
            Ok(Verdict::ok(io::emit_weight(&weight)))
        }
        Command::Verify {
            kind,
            spread,
            colouring,
            class,
            start,
            columns,
            r_columns,
            n,
            c,
            which,
            level,
            max_subset,
            max_subsets,
        } => match kind {
            VerifyKind::Tmax | VerifyKind::Tmin => {
                let side = if matches!(kind, VerifyKind::Tmax) { Side::Max } else { Side::Min };
                let levels = spread.levels.unwrap_or(6);
                let rows = verify_level_one_failure(side, levels, &budget)?;
                let mut t = Table::new(["n", "block_size", "lambda_a_one", "lambda_b", "v_exact", "v_power_set", "bound", "pass"]);
                for row in &rows {
                    t.push([
                        row.n.to_string(),
                        row.block_size.to_string(),
                        row.lambda_a_one.to_string(),
                        row.lambda_b.to_string(),
                        row.v_exact.to_string(),
                        row.v_power_set.map_or("-".to_string(), |v| v.to_string()),
                        row.bound.to_string(),
                        row.pass.to_string(),
                    ]);
                }
                Ok(Verdict {
                    text: Report::new().table(t).render(format),
                    pass: rows.iter().all(|r| r.pass),
                })
            }
            VerifyKind::Tort => {
                let spread = load_spread(spread, None)?;
                let colouring = load_colouring(colouring.as_deref(), spread.ground_arc())?;
                let rows = verify_tort_failure(&spread, &colouring, *class, *start, &budget)?;
                let mut t = Table::new(["n", "class_size", "lambda_x_one", "lambda_b", "v_exact", "bound", "pass"]);
                for row in &rows {
                    t.push([
                        row.n.to_string(),
                        row.class_size.to_string(),
                        row.lambda_x_one.to_string(),
                        row.lambda_b.to_string(),
                        row.v_exact.to_string(),
                        row.bound.to_string(),
                        row.pass.to_string(),
                    ]);
                }
                Ok(Verdict {
                    text: Report::new().table(t).render(format),
                    pass: rows.iter().all(|r| r.pass),
                })
            }
            VerifyKind::Section6 => {
                let bundle = section6_build(section6_config(*columns, *r_columns), &budget)?;
                let levels: Vec<usize> = match n {
                    Some(n) => vec![*n],
                    None => (1..=bundle.a.len()).collect(),
                };
                let mut t = Table::new(["n", "family_in_w1", "lambda_b", "v_exact", "bound", "pass"]);
                let mut pass = true;
                for n in levels {
                    let row = verify_section6_bounds(&bundle, n)?;
                    pass &= row.pass;
                    t.push([
                        row.n.to_string(),
                        row.family_in_w1.to_string(),
                        row.lambda_b.to_string(),
                        row.v_exact.to_string(),
                        row.bound.to_string(),
                        row.pass.to_string(),
                    ]);
                }
                Ok(Verdict {
                    text: Report::new().table(t).render(format),
                    pass,
                })
            }
            VerifyKind::Lemma61 => {
                let (Some(n), Some(c)) = (n, c) else {
                    return Err(CliError::Usage("lemma61 needs --n and --c".into()));
                };
                let bundle = section6_build(section6_config(*columns, *r_columns), &budget)?;
                let rep = verify_lemma_6_1(&bundle, *n, *c)?;
                let mut r = Record::new();
                r.add("n", rep.n)
                    .add("c", rep.c)
                    .add("hypothesis", rep.hypothesis)
                    .add("contained", rep.contained)
                    .add(
                        "offending",
                        rep.offending
                            .as_ref()
                            .map_or("-".to_string(), |m| labels_of(&bundle.ground, m)),
                    )
                    .add("closure_size", rep.closure_size)
                    .add("steps", rep.steps);
                Ok(Verdict {
                    text: Report::new().record(r).render(format),
                    pass: !rep.hypothesis || rep.contained,
                })
            }
            VerifyKind::Lprop => {
                let bundle = section6_build(section6_config(*columns, *r_columns), &budget)?;
                let which = match which {
                    WhichArg::S => Which::S,
                    WhichArg::R => Which::R,
                };
                let limits = PropagationLimits {
                    max_subset_size: *max_subset,
                    max_subsets: *max_subsets,
                };
                let res = verify_l_propagation(&bundle, which, parse_rational(level)?, &limits)?;
                let rep = &res.report;
                let mut r = Record::new();
                r.add("system", if which == Which::S { "S" } else { "R" })
                    .add("level", rep.level)
                    .add("level_set_size", rep.level_set_size)
                    .add("subsets_examined", rep.subsets_examined)
                    .add("pairs_examined", rep.pairs_examined)
                    .add("max_v", rep.max_v.map_or("none".to_string(), |v| v.to_string()))
                    .add("exhaustive", rep.exhaustive)
                    .add("pass", res.pass);
                Ok(Verdict {
                    text: Report::new().record(r).render(format),
                    pass: res.pass,
                })
            }
        },
        Command::Dichotomy {
            input,
            spread,
            window,
            depth,
            bound,
        } => {
            let system = load_system(input)?;
            let text = read(spread)?;
            let spread = in_file(spread, io::parse_spread(&text, system.ground_arc()))?;
            let window = match window {
                Some(w) => *w,
                None => Window::full(&spread, 1)?,
            };
            let params = DichotomyParams {
                window,
                depth: *depth,
                bound: *bound,
            };
            let run = dichotomy_search(&system, &spread, params)?;
            Ok(Verdict::ok(dichotomy_report(&system, &run.outcome, &run.rounds, params).render(format)))
        }
        Command::RefineStructure {
            input,
            chain,
            schedule,
        } => {
            let system = load_system(input)?;
            let text = read(chain)?;
            let chain_sets = in_file(chain, io::parse_family(&text, system.ground()))?;
            let schedule = (!schedule.is_empty()).then_some(schedule.as_slice());
            let rs = refined_structure(&system, &chain_sets, schedule, &budget)?;
            let ground = system.ground();
            let sched: Vec<String> = rs.schedule.iter().map(usize::to_string).collect();
            let sizes: Vec<String> = rs.spread.sizes().iter().map(usize::to_string).collect();
            let shifted: Vec<String> = rs.shifted_sizes.iter().map(usize::to_string).collect();
            let mut r = Record::new();
            r.add("schedule", sched.join(","))
                .add("block_sizes", sizes.join(","))
                .add("shifted_sizes", shifted.join(","))
                .add("tmax_contained", rs.containment.is_contained());
            let mut blocks = Table::new(["level", "block"]);
            for (k, b) in rs.spread.blocks().iter().enumerate() {
                blocks.push([(k + 1).to_string(), labels_of(ground, b)]);
            }
            let mut t = Table::new(["level", "point", "chain_index", "member"]);
            for w in &rs.witnesses {
                t.push([
                    w.level.to_string(),
                    ground.label(w.point).to_string(),
                    (w.chain_index + 1).to_string(),
                    labels_of(ground, &w.member),
                ]);
            }
            Ok(Verdict {
                text: Report::new().record(r).table(blocks).table(t).render(format),
                pass: rs.containment.is_contained(),
            })
        }
        Command::Section6 { columns, r_columns } => {
            let config = section6_config(*columns, *r_columns);
            let bundle = section6_build(config, &budget)?;
            if let Some(dir) = &common.output {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.clone(),
                    source,
                })?;
                for (name, weight) in [("s", &bundle.lambda), ("t", &bundle.lambda_t), ("r", &bundle.lambda_r)] {
                    write_file(&dir.join(format!("{name}.system")), &io::emit_system(weight.system()))?;
                    write_file(&dir.join(format!("{name}.weight")), &io::emit_weight(weight))?;
                }
            }
            let mut r = Record::new();
            r.add("columns", config.columns)
                .add("r_columns", config.r_columns)
                .add("tiles", bundle.a.len())
                .add("ground", bundle.ground.len())
                .add("s_members", bundle.s.len())
                .add("t_members", bundle.t.len())
                .add("r_members", bundle.r.len());
            Ok(Verdict::ok(Report::new().record(r).render(format)))
        }
        Command::Cayley { input } => {
            let text = read(input)?;
            let table = in_file(input, io::parse_table(&text))?;
            let image = cayley_embedding(&table)?;
            Ok(Verdict::ok(io::emit_system(&image.system)))
        }
        Command::TransferTmax { input, spread } => {
            let first = load_closed(input)?;
            let text = read(spread)?;
            let spread = in_file(spread, io::parse_spread(&text, first.ground_arc()))?;
            let witness = match contains_canonical(&first, &spread, Kind::Max, &budget)? {
                Containment::Contained(w) => w,
                Containment::Missing { level, trace, .. } => {
                    let mut r = Record::new();
                    r.add("contained", false)
                        .add("missing_level", level)
                        .add("missing_trace", labels_of(first.ground(), &trace));
                    return Ok(Verdict {
                        text: Report::new().record(r).render(format),
                        pass: false,
                    });
                }
            };
            let table = MultiplicationTable::of_system(&first)?;
            let image = cayley_embedding(&table)?;
            let transfer = transfer_tmax(&first, &image.system, &image.element_to_member, &witness, &budget)?;
            let mut r = Record::new();
            r.add("contained", true)
                .add("image_members", image.system.len())
                .add("transferred", transfer.containment.is_contained());
            let mut t = Table::new(["level", "block"]);
            for (k, b) in transfer.spread.blocks().iter().enumerate() {
                t.push([(k + 1).to_string(), labels_of(image.system.ground(), b)]);
            }
            Ok(Verdict {
                text: Report::new().record(r).table(t).render(format),
                pass: transfer.containment.is_contained(),
            })
        }
    }
}

fn kind_of(kind: CanonicalKind) -> Kind {
    match kind {
        CanonicalKind::Tmax => Kind::Max,
        CanonicalKind::Tmin => Kind::Min,
        CanonicalKind::Tort => Kind::Ort,
    }
}

fn joined(values: &[usize]) -> String {
    values.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn dichotomy_report(
    system: &SetSystem,
    outcome: &Outcome,
    rounds: &[crate::dichotomy::HalverWitness],
    params: DichotomyParams,
) -> Report {
    let ground = system.ground();
    let mut r = Record::new();
    r.add("window", params.window)
        .add("depth", params.depth)
        .add("bound", params.bound.map_or("-".to_string(), |b| b.to_string()))
        .add("rounds", rounds.len());
    let mut report = Report::new();
    match outcome {
        Outcome::Shatter(w) => {
            r.add("outcome", "shatter")
                .add("t", w.t)
                .add("levels", joined(&w.levels))
                .add("cell_minima", joined(&w.cell_minima));
            let mut t = Table::new(["position", "member"]);
            for (j, &m) in w.members.iter().enumerate() {
                t.push([(j + 1).to_string(), system.format_member(m)]);
            }
            report.record(r).table(t);
        }
        Outcome::Decisive(d) => {
            r.add("outcome", "decisive")
                .add("class", d.class)
                .add("class_points", labels_of(ground, d.colouring.class(d.class)))
                .add("levels", joined(&d.levels))
                .add("max", d.max);
            report.record(r);
        }
        Outcome::Inconclusive {
            reason,
            depth,
            levels,
            best,
        } => {
            r.add("outcome", "inconclusive")
                .add("reason", reason)
                .add("reached_depth", depth)
                .add("levels", joined(levels));
            if let Some(b) = best {
                r.add("best_class", b.class).add("best_max", b.max);
            }
            report.record(r);
        }
    }
    report
}
