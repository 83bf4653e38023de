use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use id_forge::identity::{
    enumerate_identities, equivalent, j_identities, parse_coloring, realizes, Coloring, Identity,
};
use id_forge::sampler::{estimate_realization_probability, sample_point, Colorer, SampleReport, SamplerError};
use id_forge::sat::{decode, encode, export_dimacs, parse_dimacs, parse_model, SolveOutcome};
use id_forge::statement::{search_witness, verify_witness, StatementParams, Witness};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "id-forge", version, about = "Coloring identities and the finite partition statement")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "ID_FORGE_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Every identity of the given size.
    All,
    /// Identities realized by the meet coloring.
    J,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List identities of size r.
    Identities {
        #[arg(long)]
        r: usize,
        /// Word length for the meet coloring (mode j).
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Mode::All)]
        mode: Mode,
    },
    /// Compare two colorings given as "i j color" lines.
    Check { a: PathBuf, b: PathBuf },
    /// Verify a witness file exactly.
    Verify { witness: PathBuf },
    /// Search for a witness for a parameter file.
    Search {
        params: PathBuf,
        /// Number of generators available.
        #[arg(long, default_value_t = 3)]
        budget: usize,
        /// Write the witness here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level colorings at a sampled point and a realization frequency.
    Sample {
        witness: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Vertices of P, comma separated (default: 0..r).
        #[arg(long = "P", value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        /// Level for the realization frequency (default: lambda).
        #[arg(long)]
        level: Option<usize>,
    },
    /// Encode a parameter file as DIMACS CNF.
    Encode {
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Checked against the search guard only.
        #[arg(long, default_value_t = 3)]
        budget: usize,
        /// Solve with the internal solver and write the model here.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Decode a solver model into a witness and verify it.
    Decode {
        cnf: PathBuf,
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Identities { r, depth, mode } => identities(cli.format, *r, *depth, *mode),
        Command::Check { a, b } => check(cli.format, a, b),
        Command::Verify { witness } => verify(cli.format, witness),
        Command::Search { params, budget, out } => search(cli.format, params, *budget, out.as_deref()),
        Command::Sample {
            witness,
            trials,
            seed,
            subset,
            level,
        } => sample(cli.format, witness, *trials, *seed, subset.clone(), *level),
        Command::Encode {
            params,
            out,
            budget,
            model_out,
        } => encode_cmd(cli.format, params, out.as_deref(), *budget, model_out.as_deref()),
        Command::Decode { cnf, model, out } => decode_cmd(cli.format, cnf, model, out.as_deref()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn print_json(mut v: Value) {
    if let Value::Object(map) = &mut v {
        map.insert("schemaVersion".into(), json!(SCHEMA_VERSION));
    }
    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
}

fn identities(format: Format, r: usize, depth: usize, mode: Mode) -> Result<u8> {
    if r > 5 {
        bail!("--r must be at most 5");
    }
    let list: Vec<Identity> = match mode {
        Mode::All => enumerate_identities(r).into_iter().collect(),
        Mode::J => {
            if depth == 0 || depth > 16 {
                bail!("--depth must be in 1..=16");
            }
            j_identities(r, depth).into_iter().collect()
        }
    };
    match format {
        Format::Json => print_json(json!({
            "r": r,
            "mode": match mode { Mode::All => "all", Mode::J => "j" },
            "depth": (mode == Mode::J).then_some(depth),
            "count": list.len(),
            "identities": list.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
        })),
        Format::Table => {
            println!("{} identities of size {r}", list.len());
            for (k, id) in list.iter().enumerate() {
                println!("{:>3}  {:<24} blocks={}", k + 1, id.to_string(), id.block_count());
            }
        }
    }
    Ok(0)
}

fn load_coloring(path: &Path) -> Result<Coloring> {
    parse_coloring(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn check(format: Format, a: &Path, b: &Path) -> Result<u8> {
    let fa = load_coloring(a)?;
    let fb = load_coloring(b)?;
    let ab = realizes(&fa, &fb);
    let ba = realizes(&fb, &fa);
    let eq = equivalent(&fa, &fb);
    match format {
        Format::Json => print_json(json!({
            "aRealizesB": ab,
            "bRealizesA": ba,
            "equivalent": eq,
        })),
        Format::Table => {
            println!("A realizes B: {ab}");
            println!("B realizes A: {ba}");
            println!("equivalent:   {eq}");
        }
    }
    Ok(0)
}

fn load_witness(path: &Path) -> Result<(StatementParams, Witness)> {
    Witness::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_params(path: &Path) -> Result<StatementParams> {
    serde_json::from_str(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn verify(format: Format, path: &Path) -> Result<u8> {
    let (params, witness) = load_witness(path)?;
    let report = verify_witness(&params, &witness);
    match format {
        Format::Json => print_json(json!({ "passed": report.passed(), "report": report })),
        Format::Table => print!("{report}"),
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn search(format: Format, path: &Path, budget: usize, out: Option<&Path>) -> Result<u8> {
    let params = load_params(path)?;
    let found = search_witness(&params, budget)?;
    if let (Some(w), Some(out)) = (&found, out) {
        write(out, &w.to_json(&params))?;
    }
    match format {
        Format::Json => {
            let witness = found
                .as_ref()
                .map(|w| serde_json::from_str::<Value>(&w.to_json(&params)).expect("json"));
            print_json(json!({ "found": found.is_some(), "budget": budget, "witness": witness }));
        }
        Format::Table => match &found {
            Some(w) => {
                println!("witness found with {} generators", w.generators().len());
                if out.is_none() {
                    println!("{}", w.to_json(&params));
                }
            }
            None => println!("no witness within budget {budget}"),
        },
    }
    Ok(if found.is_some() { 0 } else { 1 })
}

fn sample(
    format: Format,
    path: &Path,
    trials: u64,
    seed: u64,
    subset: Option<Vec<usize>>,
    level: Option<usize>,
) -> Result<u8> {
    let (params, witness) = load_witness(path)?;
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    let level = level.unwrap_or(params.lambda());
    if level == 0 || level > params.lambda() {
        bail!("--level must be in 1..={}", params.lambda());
    }
    let subset = match subset {
        Some(p) => Some(p),
        None if params.kappa() >= params.r() => Some((0..params.r()).collect()),
        None => None,
    };
    let result = (|| -> Result<SampleReport, SamplerError> {
        let colorer = Colorer::new(&params, &witness)?;
        let pt = sample_point(seed, colorer.generators());
        let trajectory = colorer.trajectory(&pt)?;
        let realization = subset
            .as_deref()
            .map(|p| estimate_realization_probability(&params, &witness, p, level, trials, seed))
            .transpose()?;
        Ok(SampleReport {
            pairs: trajectory.pairs,
            realization,
        })
    })();
    let report = match result {
        Ok(r) => r,
        Err(SamplerError::Statement(e)) => return Err(anyhow!(e)),
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(1);
        }
    };
    match format {
        Format::Json => print_json(serde_json::to_value(&report).expect("json")),
        Format::Table => {
            println!("w      colors by level      stabilizedAt");
            for p in &report.pairs {
                let colors: Vec<String> = p.colors.iter().map(|c| c.to_string()).collect();
                let stab = p.stabilized_at.map_or("none".to_string(), |n| n.to_string());
                println!("{:<6} {:<20} {stab}", format!("{},{}", p.w[0], p.w[1]), colors.join(" "));
            }
            if let Some(r) = &report.realization {
                println!(
                    "P={:?} L={}: frequency {:.4} ({} of {} trials, seed {}), exact {} = {:.4}",
                    r.subset,
                    r.level,
                    r.freq,
                    r.hits,
                    r.trials,
                    r.seed,
                    r.exact,
                    r.exact.to_f64()
                );
            }
        }
    }
    Ok(0)
}

fn encode_cmd(
    format: Format,
    path: &Path,
    out: Option<&Path>,
    budget: usize,
    model_out: Option<&Path>,
) -> Result<u8> {
    let params = load_params(path)?;
    let cnf = encode(&params, budget)?;
    let text = export_dimacs(&cnf);
    match out {
        Some(p) => write(p, &text)?,
        None if format == Format::Table && model_out.is_none() => print!("{text}"),
        None => {}
    }
    let outcome = model_out.map(|_| cnf.solve());
    if let (Some(p), Some(o)) = (model_out, &outcome) {
        let line = match o.literals() {
            Some(lits) => {
                let body: Vec<String> = lits.iter().map(|l| l.to_string()).collect();
                format!("s SATISFIABLE\nv {} 0\n", body.join(" "))
            }
            None => "s UNSATISFIABLE\n".to_string(),
        };
        write(p, &line)?;
    }
    let status = outcome.as_ref().map(|o| if o.is_sat() { "sat" } else { "unsat" });
    match format {
        Format::Json => print_json(json!({
            "variables": cnf.num_vars(),
            "clauses": cnf.clauses().len(),
            "pool": cnf.pool_len(),
            "status": status,
        })),
        Format::Table if out.is_some() || model_out.is_some() => {
            println!(
                "{} variables ({} pool), {} clauses",
                cnf.num_vars(),
                cnf.pool_len(),
                cnf.clauses().len()
            );
            if let Some(s) = status {
                println!("internal solver: {s}");
            }
        }
        Format::Table => {}
    }
    Ok(match outcome {
        Some(SolveOutcome::Unsat) => 1,
        _ => 0,
    })
}

fn decode_cmd(format: Format, cnf_path: &Path, model_path: &Path, out: Option<&Path>) -> Result<u8> {
    let cnf = parse_dimacs(&read(cnf_path)?).with_context(|| format!("in {}", cnf_path.display()))?;
    let model_text = read(model_path)?;
    if model_text.lines().any(|l| l.trim() == "s UNSATISFIABLE") {
        println!("model file reports an unsatisfiable instance");
        return Ok(1);
    }
    let model = parse_model(&model_text).with_context(|| format!("in {}", model_path.display()))?;
    let witness = match decode(&model, &cnf) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(1);
        }
    };
    let params = cnf.params();
    if let Some(p) = out {
        write(p, &witness.to_json(params))?;
    }
    let report = verify_witness(params, &witness);
    match format {
        Format::Json => {
            let w: Value = serde_json::from_str(&witness.to_json(params)).expect("json");
            print_json(json!({ "passed": report.passed(), "witness": w, "report": report }));
        }
        Format::Table => {
            if out.is_none() {
                println!("{}", witness.to_json(params));
            }
            print!("{report}");
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}
