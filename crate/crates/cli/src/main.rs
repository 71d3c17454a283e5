mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use clonex::closure::{enumerate_intents, DEFAULT_ENUMERATION_CAP};
use clonex::clones::{
    clone_partition, clone_partition_parallel, format_table, CloneReport, REPORT_CSV_HEADER,
};
use clonex::io::{random_context, write_cxt, RandomContextSpec};
use clonex::perms::{
    check_group, search_involutions, search_permutations, GroupViolation,
    DEFAULT_INVOLUTION_CAP, DEFAULT_PERMUTATION_CAP,
};
use clonex::{ClonePartition, Error, FormalContext, ReductionTrace, Side};
use serde_json::{json, Value};

use input::InputArgs;

const CAP_ENV: &str = "CLONEX_CAP";

#[derive(Parser)]
#[command(name = "clonex", version, about = "Clone items and closure-preserving permutations in formal contexts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clone statistics for both sides of a context
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        /// Which clone classes to list alongside the report
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        /// Dataset label (default: file stem)
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        threads: u16,
    },
    /// List clone classes with trivial/non-trivial annotations
    Clones {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = ListFormat::Table)]
        format: ListFormat,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        threads: u16,
    },
    /// Search attribute permutations preserving the intent family
    Perms {
        #[command(flatten)]
        input: InputArgs,
        /// Only products of disjoint transpositions
        #[arg(long, group = "mode")]
        two_cycles_only: bool,
        /// With --two-cycles-only: at most this many transpositions
        #[arg(long, requires = "two_cycles_only")]
        max_two_cycles: Option<usize>,
        /// Only permutations of order at most K
        #[arg(long, group = "mode", value_name = "K")]
        max_order: Option<u128>,
        /// All preserving permutations (default)
        #[arg(long, group = "mode")]
        all: bool,
        /// Check closure under composition and inverses
        #[arg(long, conflicts_with_all = ["two_cycles_only", "max_order"])]
        check_group: bool,
        /// List the identity as well
        #[arg(long)]
        include_identity: bool,
        /// Raise the ground-set size cap of the search and enumeration
        #[arg(long, value_name = "N")]
        force_cap: Option<usize>,
    },
    /// Generate a scale or a random context as .cxt
    Gen {
        #[arg(long = "type", value_enum)]
        kind: GenKind,
        /// Scale size
        #[arg(long, required_if_eq_any = [("kind", "nominal"), ("kind", "contranominal")])]
        n: Option<usize>,
        #[arg(long, default_value_t = 10)]
        objects: usize,
        #[arg(long, default_value_t = 10)]
        attributes: usize,
        #[arg(long, default_value_t = 0.5, value_parser = parse_density)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert any supported input to .cxt
    Convert {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Merge identical rows and columns; merged groups go to stderr
    Clarify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Clarify and drop reducible rows and columns; the trace goes to stderr
    Reduce {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ListFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Attributes,
    Objects,
    Both,
}

impl SideArg {
    fn sides(self) -> &'static [Side] {
        match self {
            SideArg::Attributes => &[Side::Attributes],
            SideArg::Objects => &[Side::Objects],
            SideArg::Both => &[Side::Attributes, Side::Objects],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Nominal,
    Contranominal,
    Random,
}

fn parse_density(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("density {p} is outside [0, 1]"))
    }
}

/// A failed run: message for stderr plus exit code
/// (1 analysis error, 2 I/O or parse error, 3 cap refusal).
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn io(message: String) -> Self {
        Failure { code: 2, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Csv(_) => 2,
            Error::CapExceeded { .. } => 3,
            Error::Input(_) | Error::Contract(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn env_cap(default: usize) -> Result<usize, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure {
            code: 1,
            message: format!("{CAP_ENV}={v:?} is not a non-negative integer"),
        }),
        Err(_) => Ok(default),
    }
}

fn partitions(ctx: &FormalContext, sides: &[Side], threads: u16) -> Result<Vec<ClonePartition>, Failure> {
    if threads <= 1 {
        return Ok(sides.iter().map(|&s| clone_partition(ctx, s)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads as usize)
        .build()
        .map_err(|e| Failure {
            code: 1,
            message: format!("cannot start thread pool: {e}"),
        })?;
    Ok(pool.install(|| sides.iter().map(|&s| clone_partition_parallel(ctx, s)).collect()))
}

fn side_names(ctx: &FormalContext, side: Side) -> &[String] {
    match side {
        Side::Attributes => ctx.attribute_names(),
        Side::Objects => ctx.object_names(),
    }
}

fn side_label(side: Side) -> &'static str {
    match side {
        Side::Attributes => "attribute",
        Side::Objects => "object",
    }
}

fn named_classes(p: &ClonePartition, names: &[String]) -> Vec<Vec<String>> {
    p.proper_classes()
        .map(|c| c.iter().map(|&i| names[i].clone()).collect())
        .collect()
}

fn analyze(input: &InputArgs, format: OutputFormat, side: SideArg, name: Option<String>, threads: u16) -> Result<String, Failure> {
    let ctx = input.load()?;
    let name = name.unwrap_or_else(|| input.dataset_name());
    let parts = partitions(&ctx, &[Side::Attributes, Side::Objects], threads)?;
    let report = CloneReport::from_partitions(&name, &ctx, &parts[0], &parts[1]);
    let shown: Vec<&ClonePartition> = parts.iter().filter(|p| side.sides().contains(&p.side)).collect();
    Ok(match format {
        OutputFormat::Table => {
            let mut out = format_table(std::slice::from_ref(&report));
            for p in shown {
                let names = side_names(&ctx, p.side);
                out.push_str(&format!("\n{} clone classes:\n", side_label(p.side)));
                let classes = named_classes(p, names);
                if classes.is_empty() {
                    out.push_str("  none\n");
                }
                for c in classes {
                    out.push_str(&format!("  {{{}}}\n", c.join(", ")));
                }
            }
            out
        }
        OutputFormat::Csv => format!("{REPORT_CSV_HEADER}\n{}\n", report.csv_row()),
        OutputFormat::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            for p in shown {
                v[format!("{}_classes", side_label(p.side))] =
                    json!(named_classes(p, side_names(&ctx, p.side)));
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    })
}

fn clones(input: &InputArgs, side: SideArg, format: ListFormat, threads: u16) -> Result<String, Failure> {
    let ctx = input.load()?;
    let parts = partitions(&ctx, side.sides(), threads)?;
    let mut out = String::new();
    let mut doc = serde_json::Map::new();
    for p in &parts {
        let names = side_names(&ctx, p.side);
        let pairs = p.proper_pairs();
        match format {
            ListFormat::Table => {
                out.push_str(&format!("{} clone classes:\n", side_label(p.side)));
                if pairs.is_empty() {
                    out.push_str("  all classes are singletons\n");
                }
                for class in p.proper_classes() {
                    let members: Vec<&str> = class.iter().map(|&i| names[i].as_str()).collect();
                    out.push_str(&format!("  {{{}}}\n", members.join(", ")));
                    for &(x, y) in pairs.iter().filter(|(x, _)| class.contains(x)) {
                        let kind = if p.is_trivial_pair(x, y) { "trivial" } else { "non-trivial" };
                        out.push_str(&format!("    {} ~ {}  {kind}\n", names[x], names[y]));
                    }
                }
            }
            ListFormat::Json => {
                let classes: Vec<Vec<&str>> = p
                    .classes
                    .iter()
                    .map(|c| c.iter().map(|&i| names[i].as_str()).collect())
                    .collect();
                let pair_list: Vec<Value> = pairs
                    .iter()
                    .map(|&(x, y)| json!({"a": names[x], "b": names[y], "trivial": p.is_trivial_pair(x, y)}))
                    .collect();
                doc.insert(
                    format!("{}s", side_label(p.side)),
                    json!({"classes": classes, "pairs": pair_list}),
                );
            }
        }
    }
    if format == ListFormat::Json {
        out = format!("{}\n", serde_json::to_string_pretty(&Value::Object(doc)).expect("json"));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn perms(
    input: &InputArgs,
    two_cycles_only: bool,
    max_two_cycles: Option<usize>,
    max_order: Option<u128>,
    check: bool,
    include_identity: bool,
    force_cap: Option<usize>,
) -> Result<String, Failure> {
    let ctx = input.load()?;
    let (clar, _) = ctx.clarify();
    let enum_cap = force_cap.map_or_else(|| env_cap(DEFAULT_ENUMERATION_CAP), Ok)?;
    let family = enumerate_intents(&clar, enum_cap)?;
    let n = clar.num_attributes();
    let include_identity = include_identity || check;
    let result = if two_cycles_only {
        let cap = force_cap.map_or_else(|| env_cap(DEFAULT_INVOLUTION_CAP), Ok)?;
        search_involutions(&family, max_two_cycles.unwrap_or(n / 2), cap, include_identity)?
    } else {
        let cap = force_cap.map_or_else(|| env_cap(DEFAULT_PERMUTATION_CAP), Ok)?;
        search_permutations(&family, max_order, cap, include_identity)?
    };
    let names = clar.attribute_names();
    let mut out = String::new();
    for p in &result.found {
        out.push_str(&p.to_cycle_string(names));
        out.push('\n');
    }
    eprintln!(
        "{} preserving permutation(s) over {} attributes, {} closed sets",
        result.found.len(),
        n,
        result.family_size
    );
    if check {
        let g = check_group(&result)?;
        if g.is_group {
            out.push_str(&format!("group: yes (order {})\n", g.size));
        } else {
            let why = match g.violation {
                Some(GroupViolation::Inverse(p)) => format!("inverse of {} missing", p.to_cycle_string(names)),
                Some(GroupViolation::Composition { first, second }) => format!(
                    "{} then {} missing",
                    first.to_cycle_string(names),
                    second.to_cycle_string(names)
                ),
                None => String::new(),
            };
            out.push_str(&format!("group: no ({why})\n"));
        }
    }
    Ok(out)
}

fn gen(kind: GenKind, n: Option<usize>, spec: RandomContextSpec) -> Result<String, Failure> {
    let ctx = match kind {
        GenKind::Nominal => FormalContext::nominal_scale(n.unwrap_or(0))?,
        GenKind::Contranominal => FormalContext::contranominal_scale(n.unwrap_or(0))?,
        GenKind::Random => random_context(&spec)?,
    };
    Ok(write_cxt(&ctx))
}

fn describe_groups(label: &str, classes: &[Vec<usize>], names: &[String]) {
    for c in classes.iter().filter(|c| c.len() > 1) {
        let members: Vec<&str> = c.iter().map(|&i| names[i].as_str()).collect();
        eprintln!("merged {label}: {{{}}}", members.join(", "));
    }
}

fn describe_trace(ctx: &FormalContext, t: &ReductionTrace) {
    describe_groups("objects", &t.merged_classes_objects, ctx.object_names());
    describe_groups("attributes", &t.merged_classes_attributes, ctx.attribute_names());
    for &g in &t.removed_reducible_objects {
        eprintln!("removed reducible object: {}", ctx.object_names()[g]);
    }
    for &m in &t.removed_reducible_attributes {
        eprintln!("removed reducible attribute: {}", ctx.attribute_names()[m]);
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Analyze { input, format, side, name, threads } => analyze(&input, format, side, name, threads),
        Command::Clones { input, side, format, threads } => clones(&input, side, format, threads),
        Command::Perms {
            input,
            two_cycles_only,
            max_two_cycles,
            max_order,
            all: _,
            check_group,
            include_identity,
            force_cap,
        } => perms(&input, two_cycles_only, max_two_cycles, max_order, check_group, include_identity, force_cap),
        Command::Gen { kind, n, objects, attributes, density, seed } => gen(
            kind,
            n,
            RandomContextSpec {
                num_objects: objects,
                num_attributes: attributes,
                density,
                seed,
            },
        ),
        Command::Convert { input } => Ok(write_cxt(&input.load()?)),
        Command::Clarify { input } => {
            let ctx = input.load()?;
            let (out, trace) = ctx.clarify();
            describe_trace(&ctx, &trace);
            Ok(write_cxt(&out))
        }
        Command::Reduce { input } => {
            let ctx = input.load()?;
            let (out, trace) = ctx.reduce();
            describe_trace(&ctx, &trace);
            Ok(write_cxt(&out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("clonex: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
