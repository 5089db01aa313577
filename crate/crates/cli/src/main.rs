use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use moonshine_engine::physical::CHECKED_DEGREES;
use moonshine_engine::rational::{parse_rational, Rational};
use moonshine_engine::report::{
    character_rows, characters_document, derive_q_document, noghost_items, physical_document, verify_document,
    ReportDocument, Status, Suite,
};

/// Largest `--max` accepted by `characters`.
const MAX_CHARACTER_PRECISION: usize = 64;
/// Largest descendant-plus-Fock level accepted by `physical` and `noghost`.
const MAX_BLOCK_LEVEL: i64 = 7;

#[derive(Parser)]
#[command(name = "moonshine", version, about = "Exact verification reports for moonshine-type VOA computations")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Central charge of V, as an integer or p/q.
    #[arg(long = "c", value_parser = parse_c, default_value = "24", global = true)]
    c: Rational,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// PBW expansion of the projection operator Q^{hv,hu}_k(-m).
    DeriveQ {
        #[arg(long)]
        hv: u32,
        #[arg(long)]
        hu: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
    },
    /// Compare derived values with the published ones.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Coefficients of j - 744, primary multiplicities and related tables.
    Characters {
        #[arg(long, default_value_t = 10)]
        max: usize,
    },
    /// Physical states, radical and multiplicity of one block.
    Physical {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        k: u32,
        /// Include the physical and radical bases.
        #[arg(long)]
        dump: bool,
    },
    /// The weight-6 congruence between the two degree-(2,3) families.
    Lemma13,
    /// Physical multiplicities against the primary decomposition of V_{mn+1}.
    Noghost {
        #[arg(long, allow_hyphen_values = true, requires = "n")]
        m: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "m")]
        n: Option<i64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemma7,
    Remark9,
    Lemma13,
    Noghost,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Lemma7 => Suite::Lemma7,
            SuiteArg::Remark9 => Suite::Remark9,
            SuiteArg::Lemma13 => Suite::Lemma13,
            SuiteArg::Noghost => Suite::Noghost,
            SuiteArg::All => Suite::All,
        }
    }
}

fn parse_c(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A failed precondition: reported on stderr with exit code 2.
struct UsageError(String);

fn check_block(m: i64, n: i64, k: Option<u32>) -> Result<(), UsageError> {
    if m.abs() > 64 || n.abs() > 64 {
        return Err(UsageError(format!("degree ({m},{n}) out of range")));
    }
    if k == Some(1) {
        return Err(UsageError("k = 1 is excluded: V has no weight-one states".into()));
    }
    let level = 1 - k.unwrap_or(0) as i64 + m * n;
    if level > MAX_BLOCK_LEVEL {
        return Err(UsageError(format!(
            "block level {level} exceeds the supported maximum {MAX_BLOCK_LEVEL}"
        )));
    }
    Ok(())
}

enum Output {
    Report(ReportDocument),
    Characters(ReportDocument, usize),
}

fn run(cli: &Cli) -> Result<Output, UsageError> {
    let c = &cli.c;
    Ok(match &cli.command {
        Command::DeriveQ { hv, hu, k, m } => {
            Output::Report(derive_q_document(*hv, *hu, *k, *m, c).map_err(|e| UsageError(e.to_string()))?)
        }
        Command::Verify { suite } => Output::Report(verify_document((*suite).into(), c)),
        Command::Characters { max } => {
            if !(2..=MAX_CHARACTER_PRECISION).contains(max) {
                return Err(UsageError(format!("--max must lie in 2..={MAX_CHARACTER_PRECISION}")));
            }
            Output::Characters(characters_document(*max).map_err(|e| UsageError(e.to_string()))?, *max)
        }
        Command::Physical { m, n, k, dump } => {
            check_block(*m, *n, Some(*k))?;
            Output::Report(physical_document(*m, *n, *k, c, *dump))
        }
        Command::Lemma13 => {
            let mut doc = verify_document(Suite::Lemma13, c);
            doc.command = "lemma13".into();
            doc.params.clear();
            Output::Report(doc)
        }
        Command::Noghost { m, n } => {
            let mut doc = ReportDocument::new("noghost", c);
            match (m, n) {
                (Some(m), Some(n)) => {
                    check_block(*m, *n, None)?;
                    doc = doc.param("m", m).param("n", n);
                    doc.extend(single_noghost(*m, *n, c));
                }
                _ => doc.extend(noghost_items(c)),
            }
            Output::Report(doc)
        }
    })
}

fn single_noghost(m: i64, n: i64, c: &Rational) -> Vec<moonshine_engine::report::ReportItem> {
    if let Some(i) = CHECKED_DEGREES.iter().position(|&d| d == (m, n)) {
        return vec![noghost_items(c).swap_remove(i)];
    }
    use moonshine_engine::physical::noghost_check;
    use moonshine_engine::report::{format_decomposition, ReportItem};
    match noghost_check(m, n, c) {
        Ok(r) => vec![ReportItem::compare(
            format!("noghost ({m},{n})"),
            r.holds(),
            format!("{} (dim {})", format_decomposition(&r.computed), r.computed_dim),
            format!("{} (dim {})", format_decomposition(&r.expected), r.expected_dim),
        )],
        Err(e) => vec![ReportItem::compare(format!("noghost ({m},{n})"), false, e.to_string(), "V_{mn+1}")],
    }
}

fn render_text(doc: &ReportDocument, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "command: {}", doc.command)?;
    for (k, v) in &doc.params {
        writeln!(out, "  {k} = {v}")?;
    }
    writeln!(out, "central charge: {}", doc.central_charge)?;
    for item in &doc.results {
        writeln!(out, "[{}] {}", item.status.label(), item.name)?;
        writeln!(out, "    derived:  {}", item.derived)?;
        if let Some(p) = &item.paper {
            writeln!(out, "    expected: {p}")?;
        }
    }
    let count = |s| doc.results.iter().filter(|i| i.status == s).count();
    writeln!(
        out,
        "{} exact, {} mismatched, {} values (version {})",
        count(Status::ExactMatch),
        count(Status::Mismatch),
        count(Status::Value),
        doc.version
    )
}

fn render_csv(doc: &ReportDocument, out: impl Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "status", "derived", "paper"])?;
    for item in &doc.results {
        w.write_record([
            item.name.as_str(),
            item.status.label(),
            item.derived.as_str(),
            item.paper.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush()
}

fn render_character_csv(n_max: usize, out: impl Write) -> io::Result<()> {
    let rows = character_rows(n_max).map_err(io::Error::other)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "c", "primary"])?;
    for r in rows {
        w.write_record([r.n.to_string(), r.dim.to_string(), r.primary.to_string()])?;
    }
    w.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let (doc, written) = match (&output, cli.format) {
        (Output::Characters(doc, n_max), Format::Csv) => (doc, render_character_csv(*n_max, &mut out)),
        (Output::Report(doc), Format::Csv) => (doc, render_csv(doc, &mut out)),
        (Output::Report(doc) | Output::Characters(doc, _), Format::Json) => (doc, writeln!(out, "{}", doc.to_json())),
        (Output::Report(doc) | Output::Characters(doc, _), Format::Text) => (doc, render_text(doc, &mut out)),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if doc.has_mismatch() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
