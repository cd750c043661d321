//! Batch front end: code generation, encoding, corruption, decoding
//! (direct or modulo an inert prime), the worked demo, and benchmarks.
//!
//! Exit codes: 0 success, 2 decoding failure (word beyond the
//! error-correction capability), 1 usage or format errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::{json, Value};

use gabidulin::error::Error;
use gabidulin::exact_fields::{
    cyclotomic_tower, extend_by_ints, CyclicAutomorphism, FieldTower,
};
use gabidulin::gabidulin_codec::{GabidulinCode, Received, WbVariant};
use gabidulin::instances;
use gabidulin::json as fmt;
use gabidulin::residue_reduction::{
    find_inert_prime, residue_decode_and_lift, LiftAlphabet, ResidueContext,
};
use gabidulin::{demo, Result};

#[derive(Parser)]
#[command(name = "gabidulin", version, about = "Generalized Gabidulin codes over exact fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a code file from a field description.
    GenCode(GenCode),
    /// Evaluate a message polynomial on the code support.
    Encode(Encode),
    /// Add a random rank error and optional erasures to a codeword.
    Corrupt(Corrupt),
    /// Decode a received file.
    Decode(Decode),
    /// Median decode timings over a grid of (n, k) cells.
    Bench(Bench),
    /// Run the bundled worked example and diff it against the golden trace.
    Demo(Demo),
}

#[derive(Args)]
struct GenCode {
    /// Cyclotomic field Q[Y]/(1+Y+...+Y^(p-1)) for this prime p.
    #[arg(long, conflicts_with_all = ["fp", "degree", "modulus"])]
    cyclotomic: Option<u64>,
    /// Prime field characteristic for a finite tower.
    #[arg(long, requires = "degree")]
    fp: Option<u64>,
    /// Extension degree over F_p.
    #[arg(long)]
    degree: Option<usize>,
    /// Modulus coefficients c0,c1,...,cd (lowest first) over the base.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    modulus: Option<Vec<i64>>,
    /// theta maps the generator to its e-th power (cyclotomic) or to its
    /// p^e-th power (finite fields). Default 1.
    #[arg(long, default_value_t = 1)]
    theta_exp: u32,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    /// Use a random (seeded) independent support instead of 1, a, ..., a^(n-1).
    #[arg(long)]
    random_support: bool,
    /// Seed for --random-support.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct Encode {
    #[arg(long)]
    code: PathBuf,
    /// Message JSON ({"coeffs": [...]}).
    #[arg(long)]
    message: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    None,
    Line,
    Network,
}

#[derive(Args)]
struct Corrupt {
    #[arg(long)]
    code: PathBuf,
    /// Codeword JSON ({"entries": [...]}).
    #[arg(long = "in")]
    input: PathBuf,
    /// Rank of the planted error.
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Model::None)]
    model: Model,
    #[arg(long, default_value_t = 0)]
    row_erasures: usize,
    #[arg(long, default_value_t = 0)]
    col_erasures: usize,
    /// Coordinate bound for random values over Q.
    #[arg(long, default_value_t = 2)]
    bound: i64,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Gauss,
    Wb,
    WbDf,
    WbLowdeg,
}

impl Method {
    fn variant(self) -> Option<WbVariant> {
        match self {
            Method::Gauss => None,
            Method::Wb => Some(WbVariant::Standard),
            Method::WbDf => Some(WbVariant::DivisionFree),
            Method::WbLowdeg => Some(WbVariant::LowDegree),
        }
    }
}

#[derive(Args)]
struct Decode {
    #[arg(long)]
    code: PathBuf,
    /// Received JSON (any model).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Wb)]
    method: Method,
    /// Decode modulo this inert prime ("auto" picks the smallest).
    #[arg(long)]
    mod_prime: Option<String>,
    /// Lift alphabet, e.g. "0,1".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lift_alphabet: Option<Vec<i64>>,
    /// Lift to centered representatives in (-q/2, q/2].
    #[arg(long)]
    lift_centered: bool,
    /// Known bound on message coordinates (validates the prime).
    #[arg(long)]
    bound: Option<u64>,
    /// Print the reconstruction rounds.
    #[arg(long)]
    trace: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Bench {
    /// "paper" or a list like "8:2,8:4,12:2".
    #[arg(long, default_value = "paper")]
    rows: String,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// direct (division-free over Q), residue, or both.
    #[arg(long, default_value = "both")]
    mode: String,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    /// Per-cell probe timeout in seconds.
    #[arg(long, default_value_t = 60)]
    timeout_sec: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV report path.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Demo {
    /// Print the trace instead of only diffing it.
    #[arg(long)]
    print: bool,
}

fn main() -> ExitCode {
    // exit codes: 0 ok, 2 decode failure, 1 usage/format errors (clap
    // would default usage errors to 2, which is reserved here)
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Error::DecodeFail) => {
            eprintln!("decode failed: no codeword within the correction radius");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::GenCode(a) => gen_code(a),
        Command::Encode(a) => encode(a),
        Command::Corrupt(a) => corrupt(a),
        Command::Decode(a) => decode(a),
        Command::Bench(a) => bench(a),
        Command::Demo(a) => run_demo(a),
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn write_json(path: &PathBuf, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn gen_code(a: GenCode) -> Result<ExitCode> {
    let (tower, image) = if let Some(p) = a.cyclotomic {
        let tower = cyclotomic_tower(p)?;
        let gen = tower.generator(1);
        let image = tower.pow(&gen, a.theta_exp as u64);
        (tower, image)
    } else if let Some(p) = a.fp {
        let degree = a.degree.unwrap();
        let base = FieldTower::prime_field(p)?;
        let tower = match &a.modulus {
            Some(coeffs) => extend_by_ints(&base, coeffs)?,
            None => extend_by_ints(&base, &default_irreducible(p, degree)?)?,
        };
        if tower.layer_degree(1) != degree {
            return Err(Error::InvalidParams("modulus degree does not match --degree".into()));
        }
        let gen = tower.generator(1);
        let image = tower.pow(&gen, p.pow(a.theta_exp));
        (tower, image)
    } else {
        return Err(Error::InvalidParams("need --cyclotomic or --fp/--degree".into()));
    };
    let theta = CyclicAutomorphism::new(tower.clone(), image)?;
    if a.n > theta.top_degree() {
        return Err(Error::InvalidParams(format!(
            "constraint n <= m violated: n = {}, m = {}",
            a.n,
            theta.top_degree()
        )));
    }
    let support = if a.random_support {
        let seed = a.seed.ok_or_else(|| {
            Error::InvalidParams("--random-support needs --seed".into())
        })?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        instances::random_support(&theta, a.n, &mut rng, 1)?
    } else {
        let gen = tower.generator(tower.top_layer());
        (0..a.n).map(|i| tower.pow(&gen, i as u64)).collect()
    };
    let code = GabidulinCode::new(theta, support, a.k)?;
    let mut v = fmt::code_to_json(&code);
    if let Some(seed) = a.seed {
        v["meta"] = json!({ "seed": seed });
    }
    write_json(&a.out, &v)?;
    Ok(ExitCode::SUCCESS)
}

/// Lexicographically smallest monic irreducible of the given degree.
fn default_irreducible(p: u64, degree: usize) -> Result<Vec<i64>> {
    let base = FieldTower::prime_field(p)?;
    let mut digits = vec![0u64; degree];
    loop {
        let mut coeffs: Vec<i64> = digits.iter().map(|&d| d as i64).collect();
        coeffs.push(1);
        if extend_by_ints(&base, &coeffs).is_ok() {
            return Ok(coeffs);
        }
        let mut i = 0;
        loop {
            if i == degree {
                return Err(Error::Internal("no irreducible polynomial found".into()));
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn encode(a: Encode) -> Result<ExitCode> {
    let code = fmt::code_from_json(&read_json(&a.code)?)?;
    let f = fmt::message_from_json(code.theta(), &read_json(&a.message)?)?;
    let word = code.encode(&f)?;
    write_json(&a.out, &fmt::word_to_json(&word))?;
    Ok(ExitCode::SUCCESS)
}

fn corrupt(a: Corrupt) -> Result<ExitCode> {
    let code = fmt::code_from_json(&read_json(&a.code)?)?;
    let word = fmt::word_from_json(code.theta().tower(), &read_json(&a.input)?)?;
    if word.len() != code.n() {
        return Err(Error::InvalidParams("word length does not match the code".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(a.seed);
    let received = match a.model {
        Model::None => instances::corrupt_plain(&code, &word, a.rank, &mut rng, a.bound)?,
        Model::Line => instances::corrupt_line(
            &code, &word, a.rank, a.row_erasures, a.col_erasures, &mut rng, a.bound,
        )?,
        Model::Network => instances::corrupt_network(
            &code, &word, a.rank, a.row_erasures, a.col_erasures, &mut rng, a.bound,
        )?,
    };
    let mut v = fmt::received_to_json(&received);
    v["meta"] = json!({ "seed": a.seed, "rank": a.rank });
    write_json(&a.out, &v)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_mod_prime(code: &GabidulinCode, spec: &str) -> Result<u64> {
    if spec == "auto" {
        find_inert_prime(code.theta().tower(), 2)
    } else {
        spec.parse::<u64>()
            .map_err(|_| Error::InvalidParams("--mod-prime must be a prime or \"auto\"".into()))
    }
}

fn decode(a: Decode) -> Result<ExitCode> {
    let code = fmt::code_from_json(&read_json(&a.code)?)?;
    let received = fmt::received_from_json(code.theta().tower(), &read_json(&a.input)?)?;
    let result = if let Some(spec) = &a.mod_prime {
        let q = parse_mod_prime(&code, spec)?;
        let alphabet = if a.lift_centered {
            if let Some(b) = a.bound {
                if 2 * b + 1 > q {
                    return Err(Error::InvalidParams(format!(
                        "prime {q} too small for centered lifting with bound {b}"
                    )));
                }
            }
            LiftAlphabet::centered()
        } else if let Some(values) = &a.lift_alphabet {
            LiftAlphabet::from_ints(values, q)?
        } else {
            return Err(Error::InvalidParams(
                "--mod-prime needs --lift-alphabet or --lift-centered".into(),
            ));
        };
        let variant = a.method.variant().unwrap_or(WbVariant::Standard);
        if a.trace {
            print_residue_trace(&code, &received, q, variant)?;
        }
        let f = residue_decode_and_lift(&code, &received, q, &alphabet, variant)?;
        fmt::result_ok_to_json(&f, None)
    } else {
        match (&received, a.method.variant()) {
            (Received::Plain(y), None) => {
                let res = code.decode_gauss(y)?;
                fmt::result_ok_to_json(&res.f, Some(&res.e))
            }
            (Received::Plain(y), Some(variant)) => {
                if a.trace {
                    let (_, _, trace) = code.reconstruct_wb_traced(y, variant)?;
                    print!("{trace}");
                }
                let res = code.decode_wb(y, variant)?;
                fmt::result_ok_to_json(&res.f, Some(&res.e))
            }
            (_, method) => {
                let variant = method.unwrap_or(WbVariant::Standard);
                if a.trace {
                    let trace = traced_erasure_decode(&code, &received, variant)?;
                    print!("{trace}");
                }
                let f = code.decode_received(&received, variant)?;
                fmt::result_ok_to_json(&f, None)
            }
        }
    };
    match &a.out {
        Some(path) => write_json(path, &result)?,
        None => println!("{}", serde_json::to_string_pretty(&result).unwrap()),
    }
    Ok(ExitCode::SUCCESS)
}

fn traced_erasure_decode(
    code: &GabidulinCode,
    received: &Received,
    variant: WbVariant,
) -> Result<String> {
    match received {
        Received::Line(p) => {
            let tw = code.theta().tower();
            let basis = tw.power_basis(tw.top_layer());
            gabidulin::gabidulin_codec::decode_line_erasures_traced(code, &basis, p, variant)
                .map(|(_, t)| t)
        }
        Received::Network { word, pattern } => {
            gabidulin::gabidulin_codec::decode_network_erasures_traced(code, word, pattern, variant)
                .map(|(_, t)| t)
        }
        Received::Plain(_) => Ok(String::new()),
    }
}

fn print_residue_trace(
    code: &GabidulinCode,
    received: &Received,
    q: u64,
    variant: WbVariant,
) -> Result<()> {
    use gabidulin::exact_fields::pretty_list;
    let ctx = ResidueContext::new(code.theta(), q)?;
    let reduced_code = ctx.reduce_code(code)?;
    println!("== reduction mod {q} ==");
    println!("g = {}", pretty_list(reduced_code.support()));
    match received {
        Received::Plain(y) => {
            let y_bar = ctx.reduce_vector(y)?;
            println!("y = {}", pretty_list(&y_bar));
            let (_, _, trace) = reduced_code.reconstruct_wb_traced(&y_bar, variant)?;
            print!("{trace}");
        }
        Received::Network { word, pattern } => {
            let y_bar = ctx.reduce_vector(word)?;
            println!("y = {}", pretty_list(&y_bar));
            let reduced = gabidulin::gabidulin_codec::NetworkPattern {
                a_r: ctx.reduce_scalar_matrix(&pattern.a_r)?,
                b_c: ctx.reduce_scalar_matrix(&pattern.b_c)?,
            };
            let (_, trace) = gabidulin::gabidulin_codec::decode_network_erasures_traced(
                &reduced_code, &y_bar, &reduced, variant,
            )?;
            print!("{trace}");
        }
        Received::Line(pattern) => {
            let masked = pattern
                .masked
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| c.as_ref().map(|x| ctx.reduce_scalar(x)).transpose())
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let reduced = gabidulin::gabidulin_codec::LinePattern {
                masked,
                rows: pattern.rows.clone(),
                cols: pattern.cols.clone(),
            };
            let tw = ctx.residue_tower();
            let basis = tw.power_basis(1);
            let (_, trace) = gabidulin::gabidulin_codec::decode_line_erasures_traced(
                &reduced_code, &basis, &reduced, variant,
            )?;
            print!("{trace}");
        }
    }
    Ok(())
}

fn run_demo(a: Demo) -> Result<ExitCode> {
    let outcome = demo::run()?;
    if a.print {
        print!("{}", outcome.trace);
    }
    if outcome.trace == demo::GOLDEN_TRACE {
        println!("demo trace matches the bundled golden trace");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("demo trace DIFFERS from the bundled golden trace");
        Ok(ExitCode::from(1))
    }
}

// -- bench --

struct BenchRow {
    n: usize,
    cyclotomic_p: u64,
    prime: u64,
}

/// The field and inert-prime assignments used by the timing tables: each
/// length n gets the smallest suitable cyclotomic field and its smallest
/// inert prime.
fn paper_rows() -> Vec<BenchRow> {
    vec![
        BenchRow { n: 4, cyclotomic_p: 5, prime: 2 },
        BenchRow { n: 6, cyclotomic_p: 7, prime: 3 },
        BenchRow { n: 8, cyclotomic_p: 11, prime: 2 },
        BenchRow { n: 10, cyclotomic_p: 11, prime: 2 },
        BenchRow { n: 12, cyclotomic_p: 13, prime: 2 },
        BenchRow { n: 14, cyclotomic_p: 17, prime: 3 },
        BenchRow { n: 16, cyclotomic_p: 17, prime: 3 },
    ]
}

fn cyclotomic_for_n(n: usize) -> Result<BenchRow> {
    for row in paper_rows() {
        if row.n >= n {
            return Ok(BenchRow { n, ..row });
        }
    }
    Err(Error::InvalidParams(format!("no bench field configured for n = {n}")))
}

#[derive(Clone, Copy, PartialEq)]
enum BenchMode {
    Direct,
    Residue,
}

impl BenchMode {
    fn name(&self) -> &'static str {
        match self {
            BenchMode::Direct => "direct",
            BenchMode::Residue => "residue",
        }
    }
}

struct Cell {
    n: usize,
    k: usize,
    mode: &'static str,
    median_ms: Option<f64>,
    max_size_bits: Option<f64>,
}

fn bench(a: Bench) -> Result<ExitCode> {
    let modes: Vec<BenchMode> = match a.mode.as_str() {
        "direct" => vec![BenchMode::Direct],
        "residue" => vec![BenchMode::Residue],
        "both" => vec![BenchMode::Direct, BenchMode::Residue],
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown mode {other:?}; use direct, residue or both"
            )))
        }
    };
    let grid: Vec<(usize, usize)> = if a.rows == "paper" {
        paper_rows()
            .iter()
            .filter(|r| r.n <= a.max_n)
            .flat_map(|r| (1..=r.n / 2).map(move |i| (r.n, 2 * i)))
            .collect()
    } else {
        a.rows
            .split(',')
            .map(|cell| {
                let (n, k) = cell
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidParams("rows must look like 8:2,8:4".into()))?;
                let n = n.trim().parse::<usize>().map_err(|_| Error::InvalidParams("bad n".into()))?;
                let k = k.trim().parse::<usize>().map_err(|_| Error::InvalidParams("bad k".into()))?;
                Ok((n, k))
            })
            .collect::<Result<_>>()?
    };
    let mut cells: Vec<Cell> = Vec::new();
    if a.repeats > 0 {
        for &(n, k) in &grid {
            if n > a.max_n {
                continue;
            }
            for &mode in &modes {
                let cell = bench_cell(n, k, mode, a.repeats, a.seed, a.timeout_sec)?;
                eprintln!(
                    "bench n={n} k={k} {}: {}",
                    mode.name(),
                    cell.median_ms
                        .map(|ms| format!("{ms:.3} ms"))
                        .unwrap_or_else(|| "timeout".into())
                );
                cells.push(cell);
            }
        }
    }
    // CSV
    let mut csv = String::from("n,k,mode,median_ms,max_size_bits\n");
    for c in &cells {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            c.n,
            c.k,
            c.mode,
            c.median_ms.map(|v| format!("{v:.3}")).unwrap_or_else(|| "timeout".into()),
            c.max_size_bits.map(|v| format!("{v:.1}")).unwrap_or_default(),
        ));
    }
    if let Some(path) = &a.out {
        fs::write(path, &csv).map_err(|e| Error::Format(e.to_string()))?;
    }
    // text table per mode, rows n, columns k
    for &mode in &modes {
        println!("\nmode: {}", mode.name());
        let ns: Vec<usize> = {
            let mut v: Vec<usize> = cells.iter().filter(|c| c.mode == mode.name()).map(|c| c.n).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let ks: Vec<usize> = {
            let mut v: Vec<usize> = cells.iter().filter(|c| c.mode == mode.name()).map(|c| c.k).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        print!("{:>6}", "n\\k");
        for k in &ks {
            print!("{k:>12}");
        }
        println!();
        for n in &ns {
            print!("{n:>6}");
            for k in &ks {
                let cell = cells
                    .iter()
                    .find(|c| c.n == *n && c.k == *k && c.mode == mode.name());
                match cell {
                    Some(c) => match c.median_ms {
                        Some(ms) => print!("{:>12}", format!("{ms:.2}ms")),
                        None => print!("{:>12}", "timeout"),
                    },
                    None => print!("{:>12}", ""),
                }
            }
            println!();
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bench_cell(
    n: usize,
    k: usize,
    mode: BenchMode,
    repeats: usize,
    seed: u64,
    timeout_sec: u64,
) -> Result<Cell> {
    let row = cyclotomic_for_n(n)?;
    let tower = cyclotomic_tower(row.cyclotomic_p)?;
    let gen = tower.generator(1);
    // theta must generate the full Galois group: take the smallest
    // exponent that is a primitive root modulo p
    let theta = (2..row.cyclotomic_p)
        .filter_map(|e| {
            CyclicAutomorphism::new(tower.clone(), tower.pow(&gen, e))
                .ok()
                .filter(|th| th.framework_holds())
        })
        .next()
        .ok_or_else(|| Error::Internal("no primitive root found".into()))?;
    let support: Vec<_> = (0..n).map(|i| tower.pow(&gen, i as u64)).collect();
    let code = GabidulinCode::new(theta.clone(), support, k)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ k as u64);
    let timeout = Duration::from_secs(timeout_sec);
    let mut times: Vec<f64> = Vec::new();
    let mut max_size: Option<f64> = None;
    for rep in 0..repeats {
        let f = instances::random_small_message(&theta, k, &mut rng);
        let word = code.encode(&f)?;
        let t = code.t_max();
        let e = instances::random_error_of_rank(&theta, n, t, &mut rng, 1)?;
        let tw = theta.tower().clone();
        let y: Vec<_> = word.iter().zip(&e).map(|(a, b)| tw.add(a, b)).collect();
        let start = Instant::now();
        match mode {
            BenchMode::Direct => {
                let (res, stats) =
                    code.decode_wb_instrumented(&y, WbVariant::DivisionFree, false)?;
                if res.f != f {
                    return Err(Error::Internal("bench decode mismatch".into()));
                }
                let cell_max = stats
                    .rounds
                    .iter()
                    .filter_map(|r| r.max_size_bits)
                    .fold(f64::NAN, f64::max);
                if cell_max.is_finite() {
                    max_size = Some(max_size.map_or(cell_max, |m: f64| m.max(cell_max)));
                }
            }
            BenchMode::Residue => {
                let alphabet = LiftAlphabet::from_ints(&[0, 1], row.prime)?;
                let got = residue_decode_and_lift(
                    &code,
                    &Received::Plain(y.clone()),
                    row.prime,
                    &alphabet,
                    WbVariant::Standard,
                )?;
                if got != f {
                    return Err(Error::Internal("bench residue decode mismatch".into()));
                }
            }
        }
        let elapsed = start.elapsed();
        times.push(elapsed.as_secs_f64() * 1e3);
        if rep == 0 && elapsed > timeout {
            return Ok(Cell {
                n,
                k,
                mode: mode.name(),
                median_ms: None,
                max_size_bits: max_size,
            });
        }
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = times[times.len() / 2];
    Ok(Cell {
        n,
        k,
        mode: mode.name(),
        median_ms: Some(median),
        max_size_bits: max_size,
    })
}
