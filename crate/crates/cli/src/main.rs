use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use eqloc::characters::{prime_support, CharacterGroup, Evaluation};
use eqloc::corpus;
use eqloc::cyclotomic::{crt_decompose, in_sbar_mu_n, restrict_to_mu_n, PhiComponent};
use eqloc::lrr::{brion_generating_function, euler_characteristic};
use eqloc::toric::{cartier_from_divisor, parse_fan, parse_polytope, DivisorJson, Fan};
use eqloc::{Error, RingElement};

#[derive(Parser)]
#[command(
    name = "eqloc",
    version,
    about = "Exact equivariant K-theory of torus actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Every JSON-valued flag accepts inline JSON or a path to a file.
#[derive(Subcommand)]
enum Command {
    /// Equivariant Euler characteristic of O(D) by the fixed-point formula
    Lrr {
        /// Fan JSON, or the name of a built-in fan
        #[arg(long)]
        fan: String,
        /// {"coeffs": [a_0, ...]}, one coefficient per ray
        #[arg(long)]
        divisor: String,
    },
    /// Lattice-point generating function and count of a polytope
    Brion {
        #[arg(long)]
        polytope: String,
    },
    /// Support subgroup of the prime of evaluation at a torsion point
    Support {
        /// {"rank": r, "torsion": [n_1, ...]}
        #[arg(long)]
        group: String,
        /// Evaluation datum [[a_1, m_1], ...]: generator i maps to exp(2 pi i a_i / m_i)
        #[arg(long)]
        embedding: String,
    },
    /// Membership of an element in the multiplicative set attached to mu_n
    Sbar {
        /// Laurent polynomial, as text or ring-element JSON
        #[arg(long)]
        element: String,
        /// Primitive vector c of the embedding mu_n -> T
        #[arg(long)]
        embedding: String,
        #[arg(long)]
        n: u64,
        /// Inverted integer; defaults to n
        #[arg(long)]
        r: Option<u64>,
    },
    /// Cyclotomic components of the restriction of an element to mu_n
    Decompose {
        /// Laurent polynomial, as text or ring-element JSON
        #[arg(long, required_unless_present = "fan")]
        element: Option<String>,
        /// With --divisor: decompose the Euler characteristic of O(D) instead
        #[arg(long, requires = "divisor", conflicts_with = "element")]
        fan: Option<String>,
        #[arg(long)]
        divisor: Option<String>,
        #[arg(long)]
        embedding: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: Option<u64>,
    },
    /// Run the invariant suites on a built-in case ("list" prints the names)
    Check {
        #[arg(long)]
        case: String,
    },
}

fn read_input(value: &str) -> Result<String, Error> {
    let trimmed = value.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(value.to_string());
    }
    std::fs::read_to_string(Path::new(value))
        .map_err(|e| Error::MalformedInput(format!("{value}: {e}")))
}

fn load_fan(value: &str) -> Result<Fan, Error> {
    let looks_inline = value.trim_start().starts_with('{');
    if !looks_inline && !Path::new(value).exists() {
        if let Ok(f) = corpus::fan(value) {
            return Ok(f);
        }
    }
    parse_fan(&read_input(value)?)
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, value: &str) -> Result<T, Error> {
    serde_json::from_str(&read_input(value)?)
        .map_err(|e| Error::MalformedInput(format!("{what}: {e}")))
}

fn load_element(value: &str, rank: usize) -> Result<RingElement, Error> {
    if value.trim_start().starts_with('{') {
        parse_json("element", value)
    } else {
        RingElement::parse(&CharacterGroup::torus(rank), value)
    }
}

fn poly_text(coeffs: &[eqloc::rep_ring::Coeff]) -> String {
    let t = CharacterGroup::torus(1);
    let terms = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| (t.free_character(&[k as i64]).expect("rank 1"), c.clone()));
    RingElement::from_terms(&t, terms)
        .expect("rank 1")
        .to_string()
}

fn components_text(components: &[PhiComponent]) -> String {
    components
        .iter()
        .map(|c| format!("Phi_{}: {}", c.d, poly_text(&c.poly)))
        .collect::<Vec<_>>()
        .join("\n")
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn run(cli: Cli) -> Result<(String, bool), Error> {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Lrr { fan, divisor } => {
            let fan = load_fan(&fan)?;
            let d: DivisorJson = parse_json("divisor", &divisor)?;
            let chi = euler_characteristic(&fan, &cartier_from_divisor(&fan, &d.coeffs)?)?;
            Ok((if json { to_json(&chi) } else { chi.to_string() }, true))
        }
        Command::Brion { polytope } => {
            let p = parse_polytope(&read_input(&polytope)?)?;
            let series = brion_generating_function(&p)?;
            let count = series.augmentation().to_integer();
            let out = if json {
                to_json(&json!({ "series": series, "count": count.to_string() }))
            } else {
                format!("{series}\ncount: {count}")
            };
            Ok((out, true))
        }
        Command::Support { group, embedding } => {
            let group: CharacterGroup = parse_json("group", &group)?;
            let roots: Vec<(i64, i64)> = parse_json("embedding", &embedding)?;
            let s = prime_support(&group, &Evaluation { roots })?;
            let out = if json {
                to_json(&s)
            } else {
                format!(
                    "support: {}\nrestriction: {}",
                    s.support.target(),
                    to_json(&s.support.matrix())
                )
            };
            Ok((out, true))
        }
        Command::Sbar {
            element,
            embedding,
            n,
            r,
        } => {
            let c: Vec<i64> = parse_json("embedding", &embedding)?;
            let s = load_element(&element, c.len())?;
            let member = in_sbar_mu_n(&s, &c, n, r.unwrap_or(n))?;
            Ok((
                if json {
                    to_json(&json!({ "member": member }))
                } else {
                    member.to_string()
                },
                member,
            ))
        }
        Command::Decompose {
            element,
            fan,
            divisor,
            embedding,
            n,
            r,
        } => {
            let c: Vec<i64> = parse_json("embedding", &embedding)?;
            let x = match (element, fan, divisor) {
                (Some(e), _, _) => load_element(&e, c.len())?,
                (None, Some(f), Some(d)) => {
                    let fan = load_fan(&f)?;
                    let d: DivisorJson = parse_json("divisor", &d)?;
                    euler_characteristic(&fan, &cartier_from_divisor(&fan, &d.coeffs)?)?
                }
                _ => {
                    return Err(Error::MalformedInput(
                        "decompose needs --element or --fan and --divisor".into(),
                    ))
                }
            };
            let image = restrict_to_mu_n(&x, &c, n, r.unwrap_or(n))?;
            let components = crt_decompose(&image)?;
            let out = if json {
                to_json(&components)
            } else {
                format!(
                    "image: {}\n{}",
                    poly_text(&image.poly),
                    components_text(&components)
                )
            };
            Ok((out, true))
        }
        Command::Check { case } => {
            if case == "list" {
                let names: Vec<&str> = corpus::cases().iter().map(|c| c.name).collect();
                return Ok((
                    if json {
                        to_json(&names)
                    } else {
                        names.join("\n")
                    },
                    true,
                ));
            }
            let results = corpus::run_case(corpus::case(&case)?)?;
            let ok = results.iter().all(|r| r.passed != Some(false));
            let verdict = |p: Option<bool>| match p {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "skipped",
            };
            let out = if json {
                let map: serde_json::Map<String, serde_json::Value> = results
                    .iter()
                    .map(|r| (r.suite.to_string(), json!(r.passed)))
                    .collect();
                to_json(&json!({ "case": case, "passed": ok, "suites": map }))
            } else {
                results
                    .iter()
                    .map(|r| format!("{}: {}", r.suite, verdict(r.passed)))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Ok((out, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            println!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
