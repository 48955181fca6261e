use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use semifield::crosscheck::Check;
use semifield::equivalence::{self, NewFamilyParams};
use semifield::families::{self, FAMILY_NAMES};
use semifield::{io, selftest, Error, FieldCtx, PreSemifield, Result};

#[derive(Parser)]
#[command(name = "semifield", version, about = "Build and compare finite presemifields of order p^2m")]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: u32,
}

#[derive(Args)]
struct ExpArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: u32,
    /// σ = Frob(k).
    #[arg(long)]
    k: u32,
    /// τ = Frob(l).
    #[arg(long)]
    l: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Modulus, generator and order of GF(p^m).
    FieldInfo(FieldArgs),
    /// List the family names accepted by `build`.
    Families,
    /// Build a family member and write it as a presemifield file.
    Build {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        family: String,
        /// Parameter object as JSON; see `build --schema`.
        #[arg(long, default_value = "{}")]
        params: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the family's parameter schema instead of building.
        #[arg(long)]
        schema: bool,
    },
    /// Check for zero divisors and report commutativity and identity.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Left, middle and right nucleus orders.
    Nuclei {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The six Knuth orbit members with their nuclei.
    Orbit {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write each member as `<label>.json` into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Write the dual `x ∘' y = y ∘ x`.
    Dual {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the transpose.
    Transpose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for an isotopism between two presemifield files.
    Isotopic {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Allow the exhaustive search at order 81.
        #[arg(long)]
        slow: bool,
    },
    /// Decide isotopy of two new-family members from their parameters.
    Classify {
        /// `{"p","m","k","l","alpha","eta"}` as JSON.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Number of isotopism classes of the new family for fixed σ and τ.
    Count(ExpArgs),
    /// Size of the diagonal autotopism centralizer, enumerated and by formula.
    Centralizer(ExpArgs),
    /// Run the correspondence checks between the known families and the constructions.
    Crosscheck,
    /// Run the library self checks up to a semifield order.
    Selftest {
        #[arg(long, default_value_t = 256)]
        max_order: u64,
    },
    /// Write the spread set of a presemifield file as text.
    ExportSpread {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Read a spread-set text file back into a presemifield file.
    ImportSpread {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Result of a command: a JSON value plus its human-readable form, and whether every check passed.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn new(json: Value, text: impl Into<String>) -> Report {
        Report { json, text: text.into(), ok: true }
    }
}

fn field(a: &FieldArgs) -> Result<Arc<FieldCtx>> {
    Ok(Arc::new(FieldCtx::new(a.p, a.m)?))
}

fn parse_json(what: &str, text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parameter(format!("{what} is not valid JSON: {e}")))
}

fn parse_params(what: &str, text: &str) -> Result<NewFamilyParams> {
    serde_json::from_value(parse_json(what, text)?)
        .map_err(|e| Error::Parameter(format!("{what} must be {{\"p\",\"m\",\"k\",\"l\",\"alpha\",\"eta\"}}: {e}")))
}

fn written(s: &PreSemifield, path: &PathBuf) -> Result<Report> {
    io::write_json(s, path)?;
    Ok(Report::new(
        json!({"out": path, "order": s.order(), "construction": s.provenance().construction}),
        format!("wrote {} (order {})", path.display(), s.order()),
    ))
}

fn checks(list: Vec<Check>) -> Report {
    let ok = list.iter().all(|c| c.passed);
    let text = list
        .iter()
        .map(|c| format!("{} {} [{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.order, c.detail))
        .collect::<Vec<_>>()
        .join("\n");
    Report { json: json!(list), text, ok }
}

fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::FieldInfo(a) => {
            let f = field(&a)?;
            let spec = f.spec();
            Ok(Report::new(
                json!({"p": f.p(), "m": f.m(), "order": f.order(), "modulus": spec.modulus, "generator": f.generator().0}),
                format!("GF({}^{}) order {} modulus {:?} generator {}", f.p(), f.m(), f.order(), spec.modulus, f.generator().0),
            ))
        }
        Command::Families => Ok(Report::new(json!(FAMILY_NAMES), FAMILY_NAMES.join("\n"))),
        Command::Build { field: fa, family, params, out, schema } => {
            if schema {
                let s = families::schema(&family)?;
                return Ok(Report::new(s.clone(), serde_json::to_string_pretty(&s)?));
            }
            let req = families::request(&family, parse_json("--params", &params)?)?;
            let s = families::build_family(&field(&fa)?, &req)?;
            match out {
                Some(path) => written(&s, &path),
                None => {
                    let text = io::to_json(&s)?;
                    Ok(Report::new(serde_json::from_str(&text)?, text))
                }
            }
        }
        Command::Verify { input } => {
            let s = io::read_json(&input)?;
            let r = s.verify_axioms();
            let unit = s.identity();
            let text = match &r.witness {
                None => format!("presemifield of order {}; commutative: {}; identity: {}", s.order(), s.is_commutative(), unit.is_some()),
                Some((x, y)) => format!("zero divisors: {x:?} ∘ {y:?} = 0"),
            };
            Ok(Report::new(json!({"ok": r.ok, "witness": r.witness, "commutative": s.is_commutative(), "identity": unit}), text))
        }
        Command::Nuclei { input } => {
            let n = io::read_json(&input)?.nuclei()?;
            Ok(Report::new(json!(n), n.to_string()))
        }
        Command::Orbit { input, out_dir } => {
            let s = io::read_json(&input)?;
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            for o in s.knuth_orbit()? {
                let n = o.semifield.nuclei()?;
                if let Some(dir) = &out_dir {
                    std::fs::create_dir_all(dir)?;
                    io::write_json(&o.semifield, &dir.join(format!("{}.json", o.label)))?;
                }
                lines.push(format!("{} {}", o.label, n));
                rows.push(json!({"label": o.label, "nuclei": n}));
            }
            Ok(Report::new(json!(rows), lines.join("\n")))
        }
        Command::Dual { input, out } => written(&io::read_json(&input)?.dual(), &out),
        Command::Transpose { input, out } => written(&io::read_json(&input)?.transpose()?, &out),
        Command::Isotopic { a, b, slow } => {
            let (s1, s2) = (io::read_json(&a)?, io::read_json(&b)?);
            let w = equivalence::brute_force_isotopic(&s1, &s2, slow)?;
            let text = if w.is_some() { "isotopic" } else { "not isotopic" };
            Ok(Report::new(json!({"isotopic": w.is_some(), "triple": w}), text))
        }
        Command::Classify { a, b } => {
            let v = equivalence::new_family_isotopic(&parse_params("--a", &a)?, &parse_params("--b", &b)?)?;
            let mut text = if v.isotopic { "isotopic".to_string() } else { "not isotopic".to_string() };
            if let Some(r) = v.rho {
                text += &format!(" (ρ = Frob({r}))");
            }
            if v.eta_zero {
                text += "; η = 0 lies outside the counted family";
            }
            Ok(Report::new(json!(v), text))
        }
        Command::Count(e) => {
            let c = equivalence::new_family_count(e.p, e.m, e.k, e.l)?;
            let text = format!("lower {:.3}, upper {}, exact {}", c.lower, c.upper, c.exact);
            Ok(Report::new(json!(c), text))
        }
        Command::Centralizer(e) => {
            let c = equivalence::centralizer_count(e.p, e.m, e.k, e.l)?;
            Ok(Report::new(json!(c), format!("enumerated {}, formula {}", c.enumerated, c.formula)))
        }
        Command::Crosscheck => Ok(checks(semifield::crosscheck::run_all())),
        Command::Selftest { max_order } => Ok(checks(selftest::run(max_order))),
        Command::ExportSpread { input, out } => {
            let s = io::read_json(&input)?;
            io::write_spread(&s, &out)?;
            Ok(Report::new(json!({"out": out, "members": s.order()}), format!("wrote {} ({} matrices)", out.display(), s.order())))
        }
        Command::ImportSpread { input, out } => written(&io::read_spread(&input)?, &out),
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_consistency() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("report serializes"));
            } else {
                println!("{}", r.text);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": e.to_string()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
