//! `falconer` command-line front end.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use falconer_core::finite_field::{self, CensusConfig, FFSet, PrimeField, SetFamily};
use falconer_core::fractal;
use falconer_core::rational::{self, Rational};
use falconer_core::reduction::{self, SplitSpec};
use falconer_core::threshold::{self, ThresholdChain};
use falconer_core::{classify, report, Error, MPoly, Quadratic3};
use serde_json::{json, Value};

const DEFAULT_BUDGET: &str = "1000000000";
const DEFAULT_BOX_BUDGET: &str = "100000000";

#[derive(Parser, Debug)]
#[command(
    name = "falconer",
    version,
    about = "Classify trivariate quadratics, build their reductions, and run finite-field and fractal experiments",
    after_help = "Polynomials use +, -, *, ^ and parentheses, e.g. \"x*y + 2z^2 - 1/3\"; `*` may be omitted after a coefficient.\n\
                  Every report starts with the canonical command line that reproduces it byte for byte.\n\
                  Exit codes: 0 success, 2 invalid input or budget exceeded, 1 internal error."
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (defaults to rayon's choice, which honors RAYON_NUM_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify f(x, y, z) as degenerate or Falconer type.
    Classify(PolyArgs),
    /// Build the lifting maps and check the anti-symmetrization identity.
    Reduction(PolyArgs),
    /// Bordered Monge-Ampere determinant of a phase function.
    Curvature(CurvatureArgs),
    /// Image sizes of f over random or structured sets in F_p.
    FfCensus(CensusArgs),
    /// Does (x-y)^2 + (z-t)^2 over A^4 cover F_p?
    FfCover(CoverArgs),
    /// Image measure over interval covers, or the near-zero mass table with --epsilon.
    FractalMeasure(MeasureArgs),
    /// |f(A, B, C)| for f = xy + z, A = {0}, B = [0, 1], C middle thirds at depth 1..n.
    Sharpness(SharpnessArgs),
    /// Exact dimension threshold of a chain of bounds.
    Thresholds(ThresholdArgs),
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Quadratic in x, y, z.
    polynomial: String,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    /// Phase function in u and v variables.
    #[arg(long, default_value = reduction::BILINEAR_PSI)]
    psi: String,
    /// Comma-separated u variables.
    #[arg(long, default_value = "u1,u2,u3")]
    u: String,
    /// Comma-separated v variables.
    #[arg(long, default_value = "v1,v2,v3")]
    v: String,
}

#[derive(Args, Debug)]
struct CensusArgs {
    polynomial: String,
    /// Prime modulus.
    #[arg(long)]
    p: u64,
    /// Set size N.
    #[arg(long)]
    n: u64,
    /// uniform-random, interval or geometric.
    #[arg(long, default_value = "uniform-random")]
    family: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    trials: u64,
    /// Cap on |A|·|B|·|C| per trial.
    #[arg(long, default_value = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Args, Debug)]
struct CoverArgs {
    /// Prime modulus.
    #[arg(long)]
    p: u64,
    /// Elements of A: comma-separated residues or inclusive ranges, e.g. `0-64,80`.
    #[arg(long)]
    set: String,
    #[arg(long, default_value = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    polynomial: String,
    /// Cover for x: `cantor:<base>:<digits>`, `point:<r>`, `interval:<lo>:<hi>` or `unit`.
    #[arg(long, default_value = "unit")]
    a: String,
    #[arg(long, default_value = "unit")]
    b: String,
    #[arg(long, default_value = "unit")]
    c: String,
    /// Depth of every Cantor cover.
    #[arg(long, default_value_t = 6)]
    depth: u32,
    /// Comma-separated ε values; switches to the near-zero mass table.
    #[arg(long)]
    epsilon: Option<String>,
    /// Cap on the number of boxes.
    #[arg(long, default_value = DEFAULT_BOX_BUDGET)]
    budget: u128,
}

#[derive(Args, Debug)]
struct SharpnessArgs {
    #[arg(long, default_value_t = 10)]
    depth: u32,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    /// Preset chain: corollary-1.4, trivial-distance or equal-sets.
    #[arg(long, conflicts_with = "chain_file", required_unless_present = "chain_file")]
    chain: Option<String>,
    /// JSON chain description.
    #[arg(long)]
    chain_file: Option<PathBuf>,
}

enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// A finished report: a JSON object or CSV rows (header included).
enum Body {
    Json(Value),
    Csv(String),
}

fn shell_quote(s: &str) -> String {
    let plain = !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b"_-./:=,".contains(&b));
    if plain {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

/// Every option spelled out, so the same line reproduces the same report.
fn canonical_argv(cli: &Cli) -> Vec<String> {
    let mut v: Vec<String> = vec!["falconer".into()];
    let mut push = |items: &[&str]| v.extend(items.iter().map(|s| s.to_string()));
    match &cli.command {
        Command::Classify(a) => push(&["classify", &a.polynomial]),
        Command::Reduction(a) => push(&["reduction", &a.polynomial]),
        Command::Curvature(a) => push(&["curvature", "--psi", &a.psi, "--u", &a.u, "--v", &a.v]),
        Command::FfCensus(a) => push(&[
            "ff-census",
            &a.polynomial,
            "--p",
            &a.p.to_string(),
            "--n",
            &a.n.to_string(),
            "--family",
            &a.family,
            "--seed",
            &a.seed.to_string(),
            "--trials",
            &a.trials.to_string(),
            "--budget",
            &a.budget.to_string(),
        ]),
        Command::FfCover(a) => push(&[
            "ff-cover",
            "--p",
            &a.p.to_string(),
            "--set",
            &a.set,
            "--budget",
            &a.budget.to_string(),
        ]),
        Command::FractalMeasure(a) => {
            push(&[
                "fractal-measure",
                &a.polynomial,
                "--a",
                &a.a,
                "--b",
                &a.b,
                "--c",
                &a.c,
                "--depth",
                &a.depth.to_string(),
            ]);
            if let Some(e) = &a.epsilon {
                push(&["--epsilon", e]);
            }
            push(&["--budget", &a.budget.to_string()]);
        }
        Command::Sharpness(a) => push(&["sharpness", "--depth", &a.depth.to_string()]),
        Command::Thresholds(a) => {
            push(&["thresholds"]);
            if let Some(c) = &a.chain {
                push(&["--chain", c]);
            }
            if let Some(p) = &a.chain_file {
                push(&["--chain-file", &p.to_string_lossy()]);
            }
        }
    }
    push(&["--format", cli.format.name()]);
    v
}

fn parse_quadratic(src: &str) -> Result<Quadratic3, Failure> {
    Ok(Quadratic3::parse(src)?)
}

fn parse_set(spec: &str, field: &PrimeField) -> Result<FFSet, Failure> {
    let mut elems = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Failure::Invalid(format!("bad set element `{s}`")))
        };
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(Failure::Invalid(format!("empty range `{part}`")));
                }
                elems.extend(lo..=hi);
            }
            None => elems.push(num(part)?),
        }
    }
    if elems.is_empty() {
        return Err(Failure::Invalid("the set is empty".into()));
    }
    Ok(FFSet::new(elems, field)?)
}

fn json_only(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        Err(Failure::Invalid(format!("{what} reports are JSON only")))
    } else {
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<Body, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Classify(a) => {
            let f = parse_quadratic(&a.polynomial)?;
            let c = classify(&f)?;
            Ok(match format {
                Format::Json => Body::Json(report::classification(&f, &c)),
                Format::Csv => Body::Csv(format!("polynomial,verdict\n{},{}\n", f, c.label())),
            })
        }
        Command::Reduction(a) => {
            json_only(format, "reduction")?;
            let f = parse_quadratic(&a.polynomial)?;
            let red = reduction::reduce(&f)?;
            Ok(Body::Json(report::reduction(&f, &red)))
        }
        Command::Curvature(a) => {
            json_only(format, "curvature")?;
            let psi: MPoly = a.psi.parse()?;
            let names = |s: &str| -> Result<[String; 3], Failure> {
                let v: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
                v.try_into()
                    .map_err(|_| Failure::Invalid(format!("expected three variables in `{s}`")))
            };
            let split = SplitSpec::new(names(&a.u)?, names(&a.v)?)?;
            let det = reduction::monge_ampere(&psi, &split)?;
            Ok(Body::Json(report::curvature(&psi, &split.u, &split.v, &det)))
        }
        Command::FfCensus(a) => {
            let f = parse_quadratic(&a.polynomial)?;
            let field = PrimeField::new(a.p)?;
            let cfg = CensusConfig {
                n: a.n,
                trials: a.trials,
                family: a.family.parse::<SetFamily>()?,
                seed: a.seed,
                budget: a.budget,
            };
            let rep = finite_field::expander_census(&f, &field, &cfg)?;
            Ok(match format {
                Format::Json => Body::Json(report::census(&f, &rep)),
                Format::Csv => Body::Csv(rep.to_csv()),
            })
        }
        Command::FfCover(a) => {
            let field = PrimeField::new(a.p)?;
            let set = parse_set(&a.set, &field)?;
            let image = finite_field::distance_image(&set, &field, a.budget)?;
            let covers = image.len() as u64 == a.p;
            Ok(match format {
                Format::Json => Body::Json(json!({
                    "p": a.p,
                    "set_size": set.len(),
                    "image_size": image.len(),
                    "covers": covers,
                })),
                Format::Csv => Body::Csv(format!(
                    "p,set_size,image_size,covers\n{},{},{},{}\n",
                    a.p,
                    set.len(),
                    image.len(),
                    covers
                )),
            })
        }
        Command::FractalMeasure(a) => {
            let f = parse_quadratic(&a.polynomial)?;
            let covers = [
                fractal::parse_cover(&a.a, a.depth)?,
                fractal::parse_cover(&a.b, a.depth)?,
                fractal::parse_cover(&a.c, a.depth)?,
            ];
            let side = [&covers[0], &covers[1], &covers[2]];
            match &a.epsilon {
                None => {
                    let m = fractal::image_measure(&f, side, a.budget)?;
                    Ok(match format {
                        Format::Json => Body::Json(json!({
                            "polynomial": f.to_string(),
                            "boxes": side.iter().map(|c| c.len()).product::<usize>(),
                            "measure": rational::format(&m),
                            "measure_float": format!("{:.6}", rational::to_f64(&m)),
                        })),
                        Format::Csv => Body::Csv(format!(
                            "measure,measure_float\n{},{:.6}\n",
                            rational::format(&m),
                            rational::to_f64(&m)
                        )),
                    })
                }
                Some(list) => {
                    let eps = list
                        .split(',')
                        .map(rational::parse)
                        .collect::<Result<Vec<Rational>, _>>()?;
                    let rows = fractal::near_zero_mass_table(&f, side, side, &eps, a.budget)?;
                    Ok(match format {
                        Format::Json => {
                            let mut v = report::near_zero_mass(&rows);
                            v["polynomial"] = json!(f.to_string());
                            Body::Json(v)
                        }
                        Format::Csv => {
                            let mut s = String::from("epsilon,pairs,mass,ratio,ratio_float\n");
                            for r in &rows {
                                s.push_str(&format!(
                                    "{},{},{},{},{:.6}\n",
                                    rational::format(&r.epsilon),
                                    r.pairs,
                                    rational::format(&r.mass),
                                    rational::format(&r.ratio),
                                    rational::to_f64(&r.ratio)
                                ));
                            }
                            Body::Csv(s)
                        }
                    })
                }
            }
        }
        Command::Sharpness(a) => {
            let rows = fractal::sharpness_demo(a.depth)?;
            Ok(match format {
                Format::Json => Body::Json(report::sharpness(&rows)),
                Format::Csv => {
                    let mut s = String::from("depth,measure,measure_float\n");
                    for (k, m) in &rows {
                        s.push_str(&format!(
                            "{k},{},{:.6}\n",
                            rational::format(m),
                            rational::to_f64(m)
                        ));
                    }
                    Body::Csv(s)
                }
            })
        }
        Command::Thresholds(a) => {
            let chain = match (&a.chain, &a.chain_file) {
                (Some(name), _) => ThresholdChain::preset(name)?,
                (None, Some(path)) => {
                    let src = fs::read_to_string(path).map_err(|e| {
                        Failure::Invalid(format!("cannot read {}: {e}", path.display()))
                    })?;
                    ThresholdChain::from_json(&src)?
                }
                (None, None) => return Err(Failure::Invalid("--chain or --chain-file is required".into())),
            };
            let res = threshold::dimension_threshold(&chain)?;
            Ok(match format {
                Format::Json => Body::Json(report::threshold(&res)),
                Format::Csv => Body::Csv(format!(
                    "chain,threshold\n{},{}\n",
                    res.name,
                    rational::format(&res.threshold)
                )),
            })
        }
    }
}

fn render(cli: &Cli, body: Body) -> String {
    let argv = canonical_argv(cli);
    let command = argv.iter().map(|a| shell_quote(a)).collect::<Vec<_>>().join(" ");
    match body {
        Body::Json(result) => {
            let doc = json!({
                "config": { "argv": argv, "command": command },
                "result": result,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Body::Csv(rows) => format!("# {command}\n{rows}"),
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let body = match cli.threads {
        Some(0) => return Err(Failure::Invalid("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Internal(format!("thread pool: {e}")))?
            .install(|| run(cli))?,
        None => run(cli)?,
    };
    Ok(render(cli, body))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| execute(&cli))
        .unwrap_or_else(|_| Err(Failure::Internal("unexpected panic".into())));
    let text = match outcome {
        Ok(t) => t,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("internal error: cannot write report: {e}");
            ExitCode::from(1)
        }
    }
}
