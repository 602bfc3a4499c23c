use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tambara_core::expr::evaluate;
use tambara_core::ideals::{check_tambara, j_ideal, recognize_j, IdealSequence, SForm, TambaraCheck};
use tambara_core::oracle::max_oracle_from_env;
use tambara_core::primality::{falsify_prime, PrimeStatus};
use tambara_core::spectrum::Spectrum;
use tambara_core::verify::{
    closed_forms, covering_certificates, example_picture, lattice_soundness, oracle_agreement,
    primality_evidence, spectrum_shape, structure_map_laws, Tally,
};
use tambara_core::{Error, GroupParams};

#[derive(Parser)]
#[command(name = "tambara", version, about = "Burnside Tambara functors of cyclic p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Group {
    /// The prime p
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// The rank r of G = Z/p^r
    #[arg(long, default_value_t = 1)]
    r: usize,
}

impl Group {
    fn params(self) -> Result<GroupParams, Error> {
        GroupParams::new(self.p, self.r)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an element expression, e.g. "jnd(2, X[1,0] + 1)"
    Eval {
        #[command(flatten)]
        group: Group,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        expr: String,
    },
    /// Build an ideal sequence by L/S steps, or a single J ideal
    Ideal {
        #[command(flatten)]
        group: Group,
        /// Generator of I_0
        #[arg(long, allow_negative_numbers = true, conflicts_with = "j")]
        base: Option<i64>,
        /// Steps applied to the base, left to right, e.g. "LSL"
        #[arg(long, default_value = "", requires = "base")]
        ops: String,
        /// J ideal given as l,k,x
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        j: Option<Vec<i64>>,
        /// Also run the primality falsifier with this box bound
        #[arg(long)]
        falsify: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Enumerate the prime spectrum with its inclusions and dimension
    Spec {
        #[command(flatten)]
        group: Group,
        /// Primes other than p, comma separated
        #[arg(long, value_delimiter = ',')]
        qs: Vec<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the verification suite for one group
    Verify {
        #[command(flatten)]
        group: Group,
        #[arg(long, value_delimiter = ',')]
        qs: Vec<u64>,
        /// Box bound for the primality falsifier
        #[arg(long, default_value_t = 3)]
        bound: u32,
        /// Seed for the randomized checks
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Randomized cases per law
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare closed-form norms with the section census and enumeration
    OracleCheck {
        #[command(flatten)]
        group: Group,
        /// Largest coefficient in the grid
        #[arg(long, default_value_t = 2)]
        max_coeff: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Verification(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn reject_dot(format: Format) -> Result<(), Failure> {
    if format == Format::Dot {
        return Err(Failure::Usage("dot output is only available for `spec`".into()));
    }
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_eval(group: Group, format: Format, src: &str) -> Result<(), Failure> {
    reject_dot(format)?;
    let params = group.params()?;
    let e = evaluate(src, params)?;
    match format {
        Format::Json => {
            let f = e.to_f();
            print_json(&json!({
                "expr": src,
                "level": e.level(),
                "value": e.to_string(),
                "coeffs": e.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>(),
                "f_coords": {
                    "m_top": f.m_top.to_string(),
                    "f": f.f.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                },
            }));
        }
        _ => println!("{e}"),
    }
    Ok(())
}

fn cmd_ideal(
    group: Group,
    base: Option<i64>,
    ops: &str,
    j: Option<Vec<i64>>,
    falsify: Option<u32>,
    format: Format,
) -> Result<(), Failure> {
    reject_dot(format)?;
    let params = group.params()?;
    if let Some(j) = j {
        let [l, k, x] = j[..] else {
            return Err(Failure::Usage("--j takes l,k,x".into()));
        };
        if l < 0 || k < 0 {
            return Err(Failure::Usage("--j needs nonnegative l and k".into()));
        }
        let ideal = j_ideal(params, l as usize, k as usize, &BigInt::from(x))?;
        match format {
            Format::Json => print_json(&json!({
                "level": l,
                "lattice": ideal.lattice().to_json(),
                "label": recognize_j(&ideal).map(|d| d.to_json()),
            })),
            _ => println!("{ideal}: basis {}", ideal.lattice()),
        }
        return Ok(());
    }
    let base = base.ok_or_else(|| Failure::Usage("give --base (with --ops) or --j".into()))?;
    let mut seq = IdealSequence::base(params, BigInt::from(base))?;
    let mut forms = Vec::new();
    for c in ops.chars() {
        match c.to_ascii_uppercase() {
            'L' => {
                seq = seq.l_op()?;
                forms.push(Value::Null);
            }
            'S' => {
                let (next, form) = seq.s_op()?;
                seq = next;
                forms.push(json!(match form {
                    SForm::ClosedForm => "closed_form",
                    SForm::Generated => "generated",
                }));
            }
            other => return Err(Failure::Usage(format!("unknown step '{other}' in --ops"))),
        }
    }
    let check = check_tambara(&seq)?;
    let report = falsify.map(|b| falsify_prime(&seq, b)).transpose()?;
    match format {
        Format::Json => {
            let mut v = json!({
                "sequence": seq.to_json(),
                "s_steps": forms,
                "tambara": match &check {
                    TambaraCheck::Certified => json!("certified"),
                    TambaraCheck::Violated { level, clause } => json!({ "level": level, "violated": clause }),
                },
            });
            if let Some(r) = &report {
                v["primality"] = r.to_json();
            }
            print_json(&v);
        }
        _ => {
            for (k, ideal) in seq.ideals().iter().enumerate() {
                println!("I_{k} = {ideal}  basis {}", ideal.lattice());
            }
            match &check {
                TambaraCheck::Certified => println!("ideal sequence: certified"),
                TambaraCheck::Violated { level, clause } => {
                    println!("ideal sequence: violated at level {level}: {clause}")
                }
            }
            if let Some(r) = &report {
                match &r.status {
                    PrimeStatus::NoWitnessFound => println!("primality: no witness with bound {}", r.bound),
                    PrimeStatus::NotProper => println!("primality: not a proper ideal"),
                    PrimeStatus::Witness(w) => println!(
                        "primality: not prime, k={} i={} b={} a={}",
                        w.k, w.i, w.b, w.a
                    ),
                }
            }
        }
    }
    if let TambaraCheck::Violated { .. } = check {
        return Err(Failure::Verification("not an ideal sequence".into()));
    }
    Ok(())
}

fn cmd_spec(group: Group, qs: &[u64], format: Format) -> Result<(), Failure> {
    let s = Spectrum::compute(group.params()?, qs)?;
    match format {
        Format::Json => print_json(&s.to_json()),
        Format::Dot => print!("{}", s.to_dot()),
        Format::Text => print!("{s}"),
    }
    Ok(())
}

fn report(format: Format, checks: &[(String, Tally)]) -> Result<(), Failure> {
    let all = checks.iter().all(|(_, t)| t.passed());
    match format {
        Format::Json => print_json(&json!({
            "all_passed": all,
            "checks": checks.iter().map(|(name, t)| json!({
                "name": name,
                "passed": t.passed(),
                "cases": t.cases,
                "failed": t.failed,
                "failures": t.failures,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            for (name, t) in checks {
                println!("{} {name}: {t}", if t.passed() { "PASS" } else { "FAIL" });
            }
        }
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Verification("some checks failed".into()))
    }
}

fn cmd_verify(group: Group, qs: &[u64], bound: u32, seed: u64, cases: usize, format: Format) -> Result<(), Failure> {
    reject_dot(format)?;
    let params = group.params()?;
    let (p, r) = (params.p(), params.r());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    if (p, r) == (2, 1) && qs == [3] {
        checks.push(("picture".to_string(), example_picture()?));
    }
    checks.push(("spectrum shape".into(), spectrum_shape(params, qs)?));
    let (oracle, _) = oracle_agreement(p, r.min(3), 2, max_oracle_from_env())?;
    checks.push(("norm oracle".into(), oracle));
    checks.push(("structure maps".into(), structure_map_laws(&mut rng, p, r, 9, cases)?));
    checks.push(("L/S closed forms".into(), closed_forms(p, qs, r, 2)?));
    checks.push(("covering indices".into(), covering_certificates(p, qs, r, 2)?));
    checks.push(("primality".into(), primality_evidence(params, qs, bound)?));
    checks.push(("lattices".into(), lattice_soundness(&mut rng, cases, cases, cases / 2)?));
    report(format, &checks)
}

fn cmd_oracle(group: Group, max_coeff: i64, format: Format) -> Result<(), Failure> {
    reject_dot(format)?;
    if max_coeff < 0 {
        return Err(Failure::Usage("--max-coeff must be nonnegative".into()));
    }
    let params = group.params()?;
    let (t, enumerated) = oracle_agreement(params.p(), params.r(), max_coeff, max_oracle_from_env())?;
    if format == Format::Text {
        println!("{enumerated} norms also checked by literal enumeration");
    }
    report(format, &[("norm oracle".into(), t)])
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { group, format, expr } => cmd_eval(group, format, &expr),
        Command::Ideal {
            group,
            base,
            ops,
            j,
            falsify,
            format,
        } => cmd_ideal(group, base, &ops, j, falsify, format),
        Command::Spec { group, qs, format } => cmd_spec(group, &qs, format),
        Command::Verify {
            group,
            qs,
            bound,
            seed,
            cases,
            format,
        } => cmd_verify(group, &qs, bound, seed, cases, format),
        Command::OracleCheck {
            group,
            max_coeff,
            format,
        } => cmd_oracle(group, max_coeff, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("tambara: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("tambara: {msg}");
            ExitCode::from(2)
        }
    }
}
