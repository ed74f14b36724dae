use std::fs;
use std::io::{self, Write};
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmds_core::construct::{
    admissible_shapes, code_length, construct, ConstructError, ConstructionParams, Theorem,
};
use qmds_core::document::CodeDocument;
use qmds_core::enumerate::{enumerate, grid, prime_powers_up_to, Row};
use qmds_core::parallel::configure_threads;
use qmds_core::verify::{
    certify, CertBundle, CertifyOptions, MdsRoute, DEFAULT_MINOR_BUDGET, DEFAULT_WORD_BUDGET,
};
use qmds_core::{arith, Exec};

const OK: u8 = 0;
const VERIFY_FALSE: u8 = 1;
const BAD_INPUT: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "qmds", version, about = "Construct and certify quantum MDS codes from Hermitian self-orthogonal GRS codes")]
struct Cli {
    /// Worker threads for the parallel loops; 1 runs everything sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Budgets {
    /// Largest number of k-subset minors to enumerate.
    #[arg(long, default_value_t = DEFAULT_MINOR_BUDGET)]
    minor_budget: u128,
    /// Largest number of messages to enumerate for the exact distance.
    #[arg(long, default_value_t = DEFAULT_WORD_BUDGET)]
    word_budget: u128,
}

#[derive(Subcommand)]
enum Command {
    /// Build one code, certify it and write it as JSON.
    Construct {
        /// Family number, 1 to 5.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        theorem: u8,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        k: u64,
        /// Coset representatives, comma separated (even cosets for family 4).
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<u64>>,
        /// Odd coset representatives for family 4.
        #[arg(long, value_delimiter = ',')]
        odd_indices: Option<Vec<u64>>,
        /// Output file; defaults to T<theorem>_q<q>_h<h>_r<r>_k<k>.json.
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Certify a code document.
    Verify {
        path: PathBuf,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Construct and certify every admissible tuple in a box.
    Enumerate {
        #[arg(long)]
        max_q: u64,
        #[arg(long)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Admissible shapes and largest distances of each family at one q.
    Table {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn options(b: Budgets, exec: Exec) -> CertifyOptions {
    CertifyOptions {
        minor_budget: b.minor_budget,
        word_budget: b.word_budget,
        exec,
        ..CertifyOptions::default()
    }
}

fn route_text(r: &MdsRoute) -> String {
    match r {
        MdsRoute::Minors { count } => format!("minors ({count} checked)"),
        MdsRoute::Codewords { count } => format!("codewords ({count} enumerated)"),
        MdsRoute::Structural => "vandermonde factorisation (enumeration over budget)".into(),
        MdsRoute::BudgetExceeded => "budget exceeded".into(),
    }
}

fn print_bundle(b: &CertBundle, out: &mut impl Write) -> io::Result<()> {
    let yes = |x: bool| if x { "true" } else { "false" };
    writeln!(out, "herm_ok       {}", yes(b.herm_ok))?;
    writeln!(out, "herm_ok_dual  {}", yes(b.herm_ok_dual))?;
    writeln!(out, "mds_ok        {}", yes(b.mds_ok))?;
    writeln!(out, "mds_route     {}", route_text(&b.mds_route))?;
    if let Some(d) = b.min_distance {
        writeln!(out, "min_distance  {d}")?;
    }
    match &b.quantum {
        Some(qp) => writeln!(out, "quantum       {qp}")?,
        None => writeln!(out, "quantum       -")?,
    }
    if !b.gram_nonzero.is_empty() {
        let cells: Vec<String> = b.gram_nonzero.iter().map(|(i, j)| format!("({i},{j})")).collect();
        writeln!(out, "gram_nonzero  {}", cells.join(" "))?;
    }
    writeln!(
        out,
        "timing        gram {:.4}s, dual {:.4}s, mds {:.4}s",
        b.timing.gram_secs, b.timing.dual_secs, b.timing.mds_secs
    )?;
    if let Some(p) = &b.params_echo {
        writeln!(out, "params        {} q={} h={} r={} k={}", p.theorem, p.q, p.h, p.r, p.k)?;
    }
    Ok(())
}

fn fail(code: u8, msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    code
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    theorem: u8,
    q: u64,
    h: u64,
    r: u64,
    k: u64,
    indices: Option<Vec<u64>>,
    odd_indices: Option<Vec<u64>>,
    out: Option<PathBuf>,
    opts: CertifyOptions,
) -> u8 {
    let theorem = Theorem::from_number(theorem).expect("range checked by clap");
    let mut params = ConstructionParams::new(theorem, q, h, r, k);
    params.indices = indices;
    params.odd_indices = odd_indices;
    let c = match construct(&params) {
        Ok(c) => c,
        Err(ConstructError::Params(e)) => return fail(BAD_INPUT, e),
        Err(e) => return fail(INTERNAL, e),
    };
    let bundle = certify(&c.code, &opts);
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{theorem}_q{q}_h{h}_r{r}_k{k}.json")));
    if let Err(e) = fs::write(&path, CodeDocument::from_code(&c.code).to_json() + "\n") {
        return fail(BAD_INPUT, format!("cannot write {}: {e}", path.display()));
    }
    let mut stdout = io::stdout().lock();
    match &bundle.quantum {
        Some(qp) => {
            let _ = writeln!(stdout, "{qp}");
        }
        None => {
            let _ = writeln!(stdout, "not certified");
        }
    }
    let _ = writeln!(stdout, "route         {}", c.route);
    let _ = print_bundle(&bundle, &mut stdout);
    let _ = writeln!(stdout, "written       {}", path.display());
    if bundle.passed() {
        OK
    } else {
        INTERNAL
    }
}

fn cmd_verify(path: PathBuf, opts: CertifyOptions) -> u8 {
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return fail(BAD_INPUT, format!("cannot read {}: {e}", path.display())),
    };
    let code = match CodeDocument::from_json(&text).and_then(|d| d.to_code()) {
        Ok(c) => c,
        Err(e) => return fail(BAD_INPUT, e),
    };
    let bundle = certify(&code, &opts);
    let _ = print_bundle(&bundle, &mut io::stdout().lock());
    if bundle.passed() {
        OK
    } else {
        VERIFY_FALSE
    }
}

fn cmd_enumerate(max_q: u64, max_n: u64, format: Format, opts: CertifyOptions) -> u8 {
    let tuples = grid(&prime_powers_up_to(max_q), max_n);
    let (rows, counts) = enumerate(&tuples, &opts);
    let stdout = io::stdout().lock();
    let written = match format {
        Format::Csv => write_csv(&rows, stdout),
        Format::Json => serde_json::to_writer_pretty(stdout, &rows)
            .map_err(|e| e.to_string())
            .map(|_| println!()),
    };
    if let Err(e) = written {
        return fail(INTERNAL, e);
    }
    for r in rows.iter().filter(|r| !r.certified()) {
        eprintln!(
            "failed: {} q={} h={} r={} k={}: {}",
            r.theorem,
            r.q,
            r.h,
            r.r,
            r.k,
            r.error.as_deref().unwrap_or("certification failed")
        );
    }
    eprintln!("{counts}");
    if counts.failed == 0 {
        OK
    } else {
        VERIFY_FALSE
    }
}

fn write_csv(rows: &[Row], out: impl Write) -> Result<(), String> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(Row::HEADER).map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record(r.fields()).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

fn cmd_table(q: u64) -> u8 {
    if arith::prime_power(q).is_none() {
        return fail(BAD_INPUT, format!("q = {q} is not a prime power"));
    }
    println!("q = {q}; * marks d_max > q/2 + 1");
    println!("{:<8}{:>4}{:>4}{:>7}{:>7}", "family", "h", "r", "n", "d_max");
    for t in Theorem::ALL {
        for (h, r, k_max) in admissible_shapes(t, q) {
            let d = k_max + 1;
            let mark = if 2 * d > q + 2 { " *" } else { "" };
            println!("{:<8}{h:>4}{r:>4}{:>7}{d:>7}{mark}", t.to_string(), code_length(t, q, h, r));
        }
    }
    OK
}

fn run(cli: Cli) -> u8 {
    let exec = match cli.threads {
        Some(0) => return fail(BAD_INPUT, "--threads must be positive"),
        Some(1) => Exec::Sequential,
        Some(n) => {
            configure_threads(n);
            Exec::Parallel
        }
        None => Exec::Parallel,
    };
    match cli.command {
        Command::Construct {
            theorem,
            q,
            h,
            r,
            k,
            indices,
            odd_indices,
            out,
            budgets,
        } => cmd_construct(theorem, q, h, r, k, indices, odd_indices, out, options(budgets, exec)),
        Command::Verify { path, budgets } => cmd_verify(path, options(budgets, exec)),
        Command::Enumerate {
            max_q,
            max_n,
            format,
            budgets,
        } => cmd_enumerate(max_q, max_n, format, options(budgets, exec)),
        Command::Table { q } => cmd_table(q),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { BAD_INPUT } else { OK });
        }
    };
    // an internal invariant breach panics; report it as exit 3
    match panic::catch_unwind(|| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(_) => ExitCode::from(INTERNAL),
    }
}
