use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use marchtp::annotate::{annotate_from, RenderStyle, Tri};
use marchtp::corpus::{lookup, Published};
use marchtp::fault_model::{enumerate_static_faults, CellState, FaultClass, FaultPrimitive};
use marchtp::march::{parse_march, validate_march_from, MarchAlgorithm};
use marchtp::matcher::{coverage_with, MatchOptions, Semantics};
use marchtp::oracle::{oracle_coverage_with, OracleOptions, DEFAULT_CELLS};
use marchtp::report::{diff_reports, disagreements, CoverageReport, Disagreement};
use marchtp::test_primitive::{derive_test_primitive, state_tuples_for_test_primitive, test_primitive_library};
use serde_json::{json, Value};

/// Stdout printing that ignores a closed pipe.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! say_raw {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

const EXIT_DISAGREE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_INVALID: u8 = 4;
const EXIT_IO: u8 = 5;

/// Fault-coverage analysis of March memory tests.
#[derive(Parser)]
#[command(name = "marchtp", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print only the summary line.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detected primitives of a March, by matcher, oracle or both.
    Analyze(AnalyzeArgs),
    /// Print a March with a state tuple before every operation.
    Annotate {
        #[command(flatten)]
        source: MarchArgs,
        /// Render with ⟨⟩ tuples and arrows (first Either candidate only).
        #[arg(long)]
        unicode: bool,
    },
    /// Print the test primitive library.
    Library {
        /// List every concrete primitive with its test primitive and state tuples.
        #[arg(long)]
        expand: bool,
        /// Restrict to these classes (repeatable or comma separated).
        #[arg(long, value_delimiter = ',')]
        class: Vec<String>,
    },
    /// Fault-injection simulation with mismatch logs.
    Oracle {
        #[command(flatten)]
        source: MarchArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Primitives gained and lost going from one March to another.
    Diff {
        /// Baseline March (file, corpus name or inline text).
        before: String,
        /// Compared March.
        after: String,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = EngineChoice::Matcher)]
        engine: EngineChoice,
    },
}

#[derive(Args)]
struct MarchArgs {
    /// March algorithm: a .march file, a bundled name ("March A") or inline text.
    #[arg(long, short)]
    march: String,
}

#[derive(Args)]
struct CommonArgs {
    /// all, a comma separated list of class names, or primitives such as "<0w1/0/->".
    #[arg(long, default_value = "all")]
    faults: String,
    /// Memory size for the oracle.
    #[arg(long, default_value_t = DEFAULT_CELLS)]
    cells: usize,
    /// Fix the power-up content instead of requiring detection for both fills.
    #[arg(long, value_parser = ["0", "1"])]
    init: Option<String>,
    /// One line of evidence per primitive.
    #[arg(long)]
    details: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: MarchArgs,
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = EngineChoice::Both)]
    engine: EngineChoice,
    #[arg(long, value_enum, default_value_t = SemanticsChoice::Exact)]
    semantics: SemanticsChoice,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Matcher,
    Oracle,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsChoice {
    Exact,
    Printed,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Outcome = Result<u8, Failure>;

struct Loaded {
    march: MarchAlgorithm,
    published: Option<Published>,
}

fn load_march(source: &str, init: Tri) -> Result<Loaded, Failure> {
    let path = Path::new(source);
    let (text, name, published) = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| fail(EXIT_IO, format!("{source}: {e}")))?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        (text, stem, None)
    } else if let Some(entry) = lookup(source) {
        (entry.source.to_string(), Some(entry.name.to_string()), entry.published)
    } else if source.ends_with(".march") {
        return Err(fail(EXIT_IO, format!("{source}: no such file")));
    } else {
        (source.to_string(), None, None)
    };
    let mut march = parse_march(&text).map_err(|e| fail(EXIT_PARSE, format!("{source}: {e}")))?;
    if let Some(n) = name {
        if march.name.is_none() {
            march = march.with_name(n);
        }
    }
    let diags = validate_march_from(&march, init);
    if !diags.is_empty() {
        let lines: Vec<String> = diags.iter().map(|d| format!("  {d}")).collect();
        return Err(fail(EXIT_INVALID, format!("{} is not a valid March:\n{}", march.label(), lines.join("\n"))));
    }
    Ok(Loaded { march, published })
}

fn select_faults(selection: &str) -> Result<Vec<FaultPrimitive>, Failure> {
    if selection.trim().eq_ignore_ascii_case("all") {
        return Ok(enumerate_static_faults());
    }
    let mut out: Vec<FaultPrimitive> = Vec::new();
    for item in selection.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let found = match item.parse::<FaultClass>() {
            Ok(class) => class.instances(),
            Err(_) => vec![item
                .parse::<FaultPrimitive>()
                .map_err(|e| fail(EXIT_PARSE, format!("{item}: not a fault class or primitive ({e})")))?],
        };
        for fp in found {
            if !out.contains(&fp) {
                out.push(fp);
            }
        }
    }
    if out.is_empty() {
        return Err(fail(EXIT_USAGE, "empty fault selection"));
    }
    Ok(out)
}

fn init_state(init: &Option<String>) -> Option<CellState> {
    init.as_deref().map(|s| CellState::from_bit(s == "1"))
}

fn run_oracle(m: &MarchAlgorithm, faults: &[FaultPrimitive], common: &CommonArgs) -> Result<CoverageReport, Failure> {
    let opts = OracleOptions { cells: common.cells, initial: init_state(&common.init) };
    oracle_coverage_with(m, faults, opts).map_err(|e| fail(EXIT_USAGE, e.to_string()))
}

fn published_note(published: Option<Published>, computed: usize, total: usize) -> Option<String> {
    let p = published?;
    if total != enumerate_static_faults().len() {
        return None;
    }
    let verdict = if computed == p.detected {
        "matches the published count".to_string()
    } else if computed == p.itemized {
        "matches the published itemization only".to_string()
    } else {
        format!("differs from the published count by {:+}", computed as i64 - p.detected as i64)
    };
    let itemized = if p.itemized == p.detected { String::new() } else { format!(", {} itemized", p.itemized) };
    Some(format!("published: {} detected{itemized}; computed {computed}: {verdict}", p.detected))
}

fn disagreement_lines(d: &[Disagreement]) -> Vec<String> {
    d.iter().map(|d| format!("{}: matcher {}, oracle {}", d.primitive, verdict(d.matcher), verdict(d.oracle))).collect()
}

fn verdict(detected: bool) -> &'static str {
    if detected {
        "detected"
    } else {
        "undetected"
    }
}

fn analyze(cli: &Cli, args: &AnalyzeArgs) -> Outcome {
    let initial = init_state(&args.common.init);
    let loaded = load_march(&args.source.march, initial.into())?;
    let m = &loaded.march;
    let faults = select_faults(&args.common.faults)?;
    let semantics = match args.semantics {
        SemanticsChoice::Exact => Semantics::Exact,
        SemanticsChoice::Printed => Semantics::Printed,
    };
    let matcher =
        (args.engine != EngineChoice::Oracle).then(|| coverage_with(m, &faults, MatchOptions { semantics, initial }));
    let oracle = match args.engine {
        EngineChoice::Matcher => None,
        _ => Some(run_oracle(m, &faults, &args.common)?),
    };
    let dis = match (&matcher, &oracle) {
        (Some(a), Some(b)) => Some(disagreements(a, b)),
        _ => None,
    };
    let primary = matcher.as_ref().or(oracle.as_ref()).expect("some engine runs");
    let note = published_note(loaded.published, primary.detected_count(), primary.total());
    let code = if dis.as_ref().is_some_and(|d| !d.is_empty()) { EXIT_DISAGREE } else { 0 };

    if cli.json {
        let doc = json!({
            "matcher": matcher.as_ref().map(|r| r.json(m)),
            "oracle": oracle.as_ref().map(|r| r.json(m)),
            "disagreements": dis.as_ref().map(|d| disagreement_lines(d)),
            "published": loaded.published.map(|p| json!({"detected": p.detected, "itemized": p.itemized})),
            "published_note": note,
        });
        say!("{doc:#}");
        return Ok(code);
    }
    let mut out = String::new();
    for r in [&matcher, &oracle].into_iter().flatten() {
        if cli.quiet {
            let _ = writeln!(out, "{}", r.render_text().lines().next().unwrap_or_default());
        } else {
            out.push_str(&r.render_text());
            if args.common.details {
                out.push_str(&r.render_details(m));
            }
        }
    }
    if let Some(d) = &dis {
        if d.is_empty() {
            let _ = writeln!(out, "engine diff: none");
        } else {
            let _ = writeln!(out, "engine diff: {} disagreements", d.len());
            for line in disagreement_lines(d) {
                let _ = writeln!(out, "  {line}");
            }
        }
    }
    if let Some(n) = note {
        let _ = writeln!(out, "{n}");
    }
    say_raw!("{out}");
    Ok(code)
}

fn annotate_cmd(cli: &Cli, source: &MarchArgs, unicode: bool) -> Outcome {
    let loaded = load_march(&source.march, Tri::X)?;
    let am = annotate_from(&loaded.march, Tri::X);
    if cli.json {
        let doc = json!({
            "march": loaded.march.to_string(),
            "ascii": am.render(RenderStyle::Ascii),
            "unicode": am.render(RenderStyle::Unicode),
            "elements": serde_json::to_value(&am.elements).map_err(|e| fail(EXIT_IO, e.to_string()))?,
        });
        say!("{doc:#}");
    } else if unicode {
        say!("{}", am.render(RenderStyle::Unicode));
    } else {
        say!("{}", am.render(RenderStyle::Ascii));
    }
    Ok(0)
}

fn library(cli: &Cli, expand: bool, classes: &[String]) -> Outcome {
    let wanted = classes
        .iter()
        .map(|c| c.parse::<FaultClass>().map_err(|e| fail(EXIT_USAGE, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<_> =
        test_primitive_library().into_iter().filter(|r| wanted.is_empty() || wanted.contains(&r.class)).collect();
    if expand {
        let mut entries = Vec::new();
        for row in &rows {
            for fp in row.class.instances() {
                let tp = derive_test_primitive(&fp);
                let reqs: Vec<String> =
                    state_tuples_for_test_primitive(&tp, None).iter().map(|r| r.to_string()).collect();
                entries.push((row.class, fp, tp, reqs));
            }
        }
        if cli.json {
            let doc: Vec<Value> = entries
                .iter()
                .map(|(c, fp, tp, reqs)| {
                    json!({"class": c.name(), "primitive": fp.to_string(), "test": tp.to_string(), "tuples": reqs})
                })
                .collect();
            say!("{:#}", Value::Array(doc));
        } else if cli.quiet {
            say!("{} test primitives", entries.len());
        } else {
            for (c, fp, tp, reqs) in &entries {
                say!("{:<9} {:<16} {:<40} {}", c.name(), fp.to_string(), tp.to_string(), reqs.join(" | "));
            }
        }
        return Ok(0);
    }
    if cli.json {
        let doc: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({"class": r.class.name(), "fault": r.fault.to_unicode(), "test": r.test.to_unicode(), "notes": r.test.notes()})
            })
            .collect();
        say!("{:#}", Value::Array(doc));
    } else if cli.quiet {
        say!("{} classes", rows.len());
    } else {
        for r in &rows {
            say!("{:<9} {:<14} {}", r.class.name(), r.fault.to_unicode(), r.test.to_unicode());
            for n in r.test.notes() {
                say!("{:<9} {:<14} also {n}", "", "");
            }
        }
    }
    Ok(0)
}

fn oracle_cmd(cli: &Cli, source: &MarchArgs, common: &CommonArgs) -> Outcome {
    let loaded = load_march(&source.march, init_state(&common.init).into())?;
    let m = &loaded.march;
    let faults = select_faults(&common.faults)?;
    let report = run_oracle(m, &faults, common)?;
    if cli.json {
        say!("{:#}", serde_json::to_value(report.json(m)).map_err(|e| fail(EXIT_IO, e.to_string()))?);
        return Ok(0);
    }
    let text = report.render_text();
    if cli.quiet {
        say!("{}", text.lines().next().unwrap_or_default());
        return Ok(0);
    }
    say_raw!("{text}");
    // The mismatch log is the point of this command, so it is always shown.
    say_raw!("{}", report.render_details(m));
    if let Some(n) = published_note(loaded.published, report.detected_count(), report.total()) {
        say!("{n}");
    }
    Ok(0)
}

fn diff_cmd(cli: &Cli, before: &str, after: &str, common: &CommonArgs, engine: EngineChoice) -> Outcome {
    let initial = init_state(&common.init);
    let a = load_march(before, initial.into())?.march;
    let b = load_march(after, initial.into())?.march;
    let faults = select_faults(&common.faults)?;
    let run = |m: &MarchAlgorithm| -> Result<CoverageReport, Failure> {
        match engine {
            EngineChoice::Oracle => run_oracle(m, &faults, common),
            _ => Ok(coverage_with(m, &faults, MatchOptions { semantics: Semantics::Exact, initial })),
        }
    };
    let (ra, rb) = (run(&a)?, run(&b)?);
    let mut code = 0;
    if engine == EngineChoice::Both {
        let (oa, ob) = (run_oracle(&a, &faults, common)?, run_oracle(&b, &faults, common)?);
        if !disagreements(&ra, &oa).is_empty() || !disagreements(&rb, &ob).is_empty() {
            code = EXIT_DISAGREE;
        }
    }
    let d = diff_reports(&ra, &rb);
    let names = |v: &[FaultPrimitive]| v.iter().map(|f| f.to_string()).collect::<Vec<_>>();
    if cli.json {
        let doc = json!({
            "before": {"algorithm": ra.algorithm, "detected": ra.detected_count(), "total": ra.total()},
            "after": {"algorithm": rb.algorithm, "detected": rb.detected_count(), "total": rb.total()},
            "gained": names(&d.gained),
            "lost": names(&d.lost),
        });
        say!("{doc:#}");
        return Ok(code);
    }
    say!(
        "{}: {}/{} -> {}: {}/{} ({} gained, {} lost)",
        ra.algorithm,
        ra.detected_count(),
        ra.total(),
        rb.algorithm,
        rb.detected_count(),
        rb.total(),
        d.gained.len(),
        d.lost.len()
    );
    if !cli.quiet {
        for f in &d.gained {
            say!("  + {f}");
        }
        for f in &d.lost {
            say!("  - {f}");
        }
    }
    if code == EXIT_DISAGREE {
        say!("engine diff: matcher and oracle disagree");
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(args) => analyze(&cli, args),
        Command::Annotate { source, unicode } => annotate_cmd(&cli, source, *unicode),
        Command::Library { expand, class } => library(&cli, *expand, class),
        Command::Oracle { source, common } => oracle_cmd(&cli, source, common),
        Command::Diff { before, after, common, engine } => diff_cmd(&cli, before, after, common, *engine),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
