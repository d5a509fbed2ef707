//! koopcrypt command-line front end: simulate trajectories, recover
//! secrets, run the analysis modes, and benchmark recovery across primes.
//!
//! Exit codes: 0 success, 2 input error, 3 recovery failure, 4 resource
//! guard exceeded. Every command except `bench` is deterministic: identical
//! inputs produce byte-identical output modulo the timing_ms field.

use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::time::Instant;

use koopcrypt::edmd;
use koopcrypt::error::Error;
use koopcrypt::lincomp;
use koopcrypt::numtheory::{generators, mod_pow};
use koopcrypt::report::{csv_field, ExperimentReport};
use koopcrypt::spectral::{check_dimension, DimensionCheck};
use koopcrypt::{dynsys, recover_exponent, recover_rsa_key};

const DEFAULT_GUARD: u64 = 100_000;

#[derive(Parser)]
#[command(name = "koopcrypt", version, about = "modular-exponentiation dynamics toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Dh,
    Rsa,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Dimension,
    Edmd,
    Lincomp,
}

#[derive(Subcommand)]
enum Cmd {
    /// Iterate x_{k+1} = m·x_k mod p and print the trajectory
    Simulate {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        x0: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recover a DH exponent or RSA private key from the spectrum
    Recover {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        c: Option<u64>,
        #[arg(long)]
        p1: Option<u64>,
        #[arg(long)]
        p2: Option<u64>,
        #[arg(long)]
        e: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Dimension feasibility table, EDMD identification, or linear
    /// complexity of a sequence file
    Analyze {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        /// newline-separated decimal integers (lincomp mode)
        #[arg(long)]
        seq: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Time exponent recovery across generators; CSV with worst/average
    /// wall-clock seconds per prime
    Bench {
        /// comma-separated primes
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// "all" or a generator count per prime
        #[arg(long, default_value = "all")]
        sample: String,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// largest admissible prime (overrides KOOPCRYPT_GUARD)
        #[arg(long)]
        guard: Option<u64>,
    },
}

fn guard_limit(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("KOOPCRYPT_GUARD")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_GUARD)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::RecoveryFailure(_)
        | Error::InsufficientSpectrum
        | Error::DegenerateCoordinate
        | Error::NonDiagonalizable
        | Error::InversionFailure => 3,
        _ => 2,
    }
}

fn fail(code: i32, msg: &str) -> i32 {
    eprintln!("error: {}", msg);
    code
}

fn main() {
    std::process::exit(run(Cli::parse()));
}

fn run(cli: Cli) -> i32 {
    match cli.cmd {
        Cmd::Simulate { p, m, steps, x0, format } => cmd_simulate(p, m, steps, x0, format),
        Cmd::Recover { scheme, p, m, c, p1, p2, e, format } => {
            cmd_recover(scheme, p, m, c, p1, p2, e, format)
        }
        Cmd::Analyze { mode, p, m, seq, format } => cmd_analyze(mode, p, m, seq, format),
        Cmd::Bench { primes, sample, out, guard } => cmd_bench(&primes, &sample, out, guard),
    }
}

fn cmd_simulate(p: u64, m: u64, steps: u64, x0: u64, format: Format) -> i32 {
    let start = Instant::now();
    let traj = match dynsys::simulate_raw(m, p, x0, steps) {
        Ok(t) => t,
        Err(e) => return fail(2, &e.to_string()),
    };
    match format {
        Format::Text => {
            let line: Vec<String> = traj.values().iter().map(|v| v.to_string()).collect();
            println!("{}", line.join(" "));
        }
        Format::Csv => {
            print!("k,x\r\n");
            for (k, v) in traj.values().iter().enumerate() {
                print!("{},{}\r\n", k, v);
            }
        }
        Format::Json => {
            let mut report = ExperimentReport::new("simulate")
                .input("p", p)
                .input("m", m)
                .input("steps", steps)
                .input("x0", x0);
            report.outputs = serde_json::json!({ "values": traj.values() });
            report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            println!("{}", report.to_json());
        }
    }
    0
}

#[allow(clippy::too_many_arguments)]
fn cmd_recover(
    scheme: SchemeArg,
    p: Option<u64>,
    m: Option<u64>,
    c: Option<u64>,
    p1: Option<u64>,
    p2: Option<u64>,
    e: Option<u64>,
    format: Format,
) -> i32 {
    let start = Instant::now();
    let (result, mut report) = match scheme {
        SchemeArg::Dh => {
            let (Some(p), Some(m), Some(c)) = (p, m, c) else {
                return fail(2, "--scheme dh requires --p, --m, --c");
            };
            let report = ExperimentReport::new("recover")
                .input("scheme", "dh")
                .input("p", p)
                .input("m", m)
                .input("c", c);
            match recover_exponent(p, m, c) {
                Ok(r) => (r, report),
                Err(err) => return fail(exit_code(&err), &err.to_string()),
            }
        }
        SchemeArg::Rsa => {
            let (Some(p1), Some(p2), Some(e)) = (p1, p2, e) else {
                return fail(2, "--scheme rsa requires --p1, --p2, --e");
            };
            let report = ExperimentReport::new("recover")
                .input("scheme", "rsa")
                .input("p1", p1)
                .input("p2", p2)
                .input("e", e);
            match recover_rsa_key(p1, p2, e) {
                Ok(r) => (r, report),
                Err(err) => return fail(exit_code(&err), &err.to_string()),
            }
        }
    };
    match format {
        Format::Text | Format::Csv => {
            println!(
                "exponent {} (mod {})",
                result.exponent, result.residue_class_modulus
            );
        }
        Format::Json => {
            report.outputs = serde_json::to_value(&result).expect("result serialization");
            report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            println!("{}", report.to_json());
        }
    }
    0
}

fn full_period(p: u64, m: u64) -> Result<dynsys::Trajectory, Error> {
    let n = dynsys::period_length(m, p)?;
    dynsys::simulate_raw(m, p, 1, n)
}

fn cmd_analyze(
    mode: Mode,
    p: Option<u64>,
    m: Option<u64>,
    seq: Option<std::path::PathBuf>,
    format: Format,
) -> i32 {
    let start = Instant::now();
    match mode {
        Mode::Dimension => {
            let (Some(p), Some(m)) = (p, m) else {
                return fail(2, "--mode dimension requires --p and --m");
            };
            // feasible exactly at and above the minimal dimension, so the
            // table stops at the first feasible q
            let mut rows: Vec<(u64, bool)> = Vec::new();
            let mut q = 1;
            loop {
                match check_dimension(p, m, q) {
                    Ok(DimensionCheck::Feasible { .. }) => {
                        rows.push((q, true));
                        break;
                    }
                    Ok(DimensionCheck::Infeasible) => rows.push((q, false)),
                    Err(e) => return fail(2, &e.to_string()),
                }
                q += 1;
            }
            match format {
                Format::Text => {
                    for (q, feasible) in &rows {
                        println!("q={} {}", q, if *feasible { "feasible" } else { "infeasible" });
                    }
                }
                Format::Csv => {
                    print!("q,feasible\r\n");
                    for (q, feasible) in &rows {
                        print!("{},{}\r\n", q, feasible);
                    }
                }
                Format::Json => {
                    let mut report = ExperimentReport::new("analyze")
                        .input("mode", "dimension")
                        .input("p", p)
                        .input("m", m);
                    report.outputs = serde_json::json!({
                        "table": rows.iter().map(|(q, f)| serde_json::json!({"q": q, "feasible": f})).collect::<Vec<_>>(),
                        "minimal": rows.last().map(|(q, _)| q),
                    });
                    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
                    println!("{}", report.to_json());
                }
            }
            0
        }
        Mode::Edmd => {
            let (Some(p), Some(m)) = (p, m) else {
                return fail(2, "--mode edmd requires --p and --m");
            };
            let traj = match full_period(p, m) {
                Ok(t) => t,
                Err(e) => return fail(2, &e.to_string()),
            };
            let (q_check, cs) = match edmd::minimal_dimension(&traj) {
                Ok(r) => r,
                Err(e) => return fail(exit_code(&e), &e.to_string()),
            };
            let alpha: Vec<String> = cs.alpha.iter().map(|a| a.to_string()).collect();
            match format {
                Format::Text => println!("q_check={} alpha=[{}]", q_check, alpha.join(", ")),
                Format::Csv => print!("{}", edmd::alpha_csv(&cs)),
                Format::Json => {
                    let mut report = ExperimentReport::new("analyze")
                        .input("mode", "edmd")
                        .input("p", p)
                        .input("m", m);
                    report.outputs = serde_json::json!({ "q_check": q_check, "alpha": alpha });
                    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
                    println!("{}", report.to_json());
                }
            }
            0
        }
        Mode::Lincomp => {
            let Some(path) = seq else {
                return fail(2, "--mode lincomp requires --seq <file>");
            };
            let text = match std::fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) => return fail(2, &format!("{}: {}", path.display(), e)),
            };
            let values = match dynsys::parse_sequence(&text) {
                Ok(v) => v,
                Err(e) => return fail(2, &e.to_string()),
            };
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "seq".into());
            let rep = match lincomp::compare_complexity(&id, &values) {
                Ok(r) => r,
                Err(e) => return fail(2, &e.to_string()),
            };
            match format {
                Format::Text | Format::Csv => {
                    print!("id,length,lfsr_length,reduced_family,reduced_dim\r\n");
                    print!("{}", rep.csv_row());
                }
                Format::Json => {
                    let mut report =
                        ExperimentReport::new("analyze").input("mode", "lincomp").input("seq", id);
                    report.outputs = serde_json::to_value(&rep).expect("report serialization");
                    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
                    println!("{}", report.to_json());
                }
            }
            0
        }
    }
}

fn cmd_bench(
    primes: &[u64],
    sample: &str,
    out: Option<std::path::PathBuf>,
    guard: Option<u64>,
) -> i32 {
    let limit = guard_limit(guard);
    let sample_n: Option<usize> = if sample == "all" {
        None
    } else {
        match sample.parse() {
            Ok(n) => Some(n),
            Err(_) => return fail(2, "--sample takes \"all\" or a positive integer"),
        }
    };
    let mut csv = String::from("p,worst_s,average_s\r\n");
    for &p in primes {
        if p > limit {
            return fail(4, &format!("p = {} exceeds the memory guard {}", p, limit));
        }
        let gens = match generators(p) {
            Ok(g) => g,
            Err(e) => return fail(2, &e.to_string()),
        };
        let picked: Vec<u64> = match sample_n {
            Some(n) if n < gens.len() => {
                // evenly spaced deterministic subset
                let step = gens.len() as f64 / n as f64;
                (0..n).map(|i| gens[(i as f64 * step) as usize]).collect()
            }
            _ => gens,
        };
        let e = (p - 1) / 2;
        let mut worst = 0f64;
        let mut total = 0f64;
        for &m in &picked {
            let c = match mod_pow(m, e, p) {
                Ok(c) => c,
                Err(err) => return fail(2, &err.to_string()),
            };
            let t0 = Instant::now();
            let r = recover_exponent(p, m, c);
            let dt = t0.elapsed().as_secs_f64();
            match r {
                Ok(res) if res.exponent == e % res.residue_class_modulus => {}
                Ok(_) => return fail(3, &format!("wrong recovery at p={} m={}", p, m)),
                Err(err) => return fail(exit_code(&err), &err.to_string()),
            }
            worst = worst.max(dt);
            total += dt;
        }
        csv.push_str(&format!(
            "{},{:.6},{:.6}\r\n",
            csv_field(&p.to_string()),
            worst,
            total / picked.len().max(1) as f64
        ));
    }
    match out {
        Some(path) => match std::fs::File::create(&path).and_then(|mut f| f.write_all(csv.as_bytes())) {
            Ok(()) => 0,
            Err(e) => fail(2, &format!("{}: {}", path.display(), e)),
        },
        None => {
            print!("{}", csv);
            0
        }
    }
}
