use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use tlab_core::group::{configured_max_order, FiniteGroup, GroupSpec, MAX_ORDER_ENV};
use tlab_core::harness::{run_suite, Config, Injection, Suite};
use tlab_core::tambara::burnside::Burnside;
use tlab_core::Result;

#[derive(Parser)]
#[command(name = "tlab", version, about = "Exact checks for Mackey and Tambara functors over small finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Run(RunArgs),
    /// Print the basis of Ω(G/H) with the marks of each class, as TSV.
    Marks {
        #[arg(long)]
        group: String,
        /// Level such as G/G, G/e or G/C2.
        #[arg(long)]
        level: String,
    },
    /// Group utilities.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Order, subgroup classes and elements.
    Info {
        #[arg(long)]
        group: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// axioms, subfunctors, fractions, ideals, mrc-fieldlike, omega-localization or all
    suite: String,
    /// Cn, Dn, Sn, An, products like C2xC2, or a JSON multiplication table.
    #[arg(long)]
    group: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 24)]
    max_points: usize,
    #[arg(long, default_value_t = 10_000)]
    max_sections: usize,
    /// Treat undecided results as warnings.
    #[arg(long)]
    lenient: bool,
    /// Write the JSON report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Inject a fault: corrupt-witness, norm, transfer, restriction or torsion.
    #[arg(long)]
    inject: Option<String>,
}

fn group(spec: &str) -> Result<Arc<FiniteGroup>> {
    let spec: GroupSpec = spec.parse()?;
    FiniteGroup::build_with_bound(&spec, configured_max_order())
}

fn run(args: RunArgs, out: &mut String) -> Result<bool> {
    let suite: Suite = args.suite.parse()?;
    let g = group(&args.group)?;
    let cfg = Config {
        seed: args.seed,
        samples: args.samples,
        max_points: args.max_points,
        max_sections: args.max_sections,
        lenient: args.lenient,
        inject: args.inject.as_deref().map(str::parse::<Injection>).transpose()?,
        ..Config::default()
    };
    let report = run_suite(suite, &g, &cfg)?;
    out.push_str(&report.summary());
    let ok = report.passed();
    let _ = writeln!(out, "{} {} on {}: {} checks", if ok { "PASS" } else { "FAIL" }, report.suite, report.group, report.checks.len());
    if let Some(path) = args.json {
        fs::write(&path, report.to_json() + "\n")
            .map_err(|e| tlab_core::Error::BadSpec(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(ok)
}

fn marks(spec: &str, level: &str, out: &mut String) -> Result<()> {
    let g = group(spec)?;
    let h = g.resolve_level(level)?;
    let om = Burnside::new(g);
    out.push_str("class\tmarks\n");
    for (j, w) in om.index_weights(h).iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", om.label(h, j), w);
    }
    Ok(())
}

fn info(spec: &str, out: &mut String) -> Result<()> {
    let g = group(spec)?;
    let _ = writeln!(out, "group\t{}", g.name());
    let _ = writeln!(out, "order\t{}", g.order());
    let _ = writeln!(out, "subgroup classes\t{}", g.class_reps(g.whole()).len());
    let _ = writeln!(out, "subgroups\t{}", g.subgroup_count());
    out.push('\n');
    let _ = writeln!(out, "class\torder\tindex\tconjugates");
    for (rep, name) in g.class_names() {
        let conjugates = g.subgroups().filter(|&k| g.class_rep_in_group(k) == rep).count();
        let _ = writeln!(out, "{name}\t{}\t{}\t{conjugates}", g.subgroup(rep).order(), g.index(rep, g.whole()));
    }
    out.push('\n');
    let _ = writeln!(out, "element\torder");
    for x in g.elements() {
        let _ = writeln!(out, "{}\t{}", g.element_label(x), g.element_order(x));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match cli.command {
        Command::Run(args) => run(args, &mut out),
        Command::Marks { group, level } => marks(&group, &level, &mut out).map(|_| true),
        Command::Group { command: GroupCommand::Info { group } } => info(&group, &mut out).map(|_| true),
    };
    // a closed pipe (e.g. `| head`) is not an error
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, tlab_core::Error::OrderBoundExceeded { .. }) {
                eprintln!("(set {MAX_ORDER_ENV} to raise the bound)");
            }
            ExitCode::from(2)
        }
    }
}
