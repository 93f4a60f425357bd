use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use thompson_core::abelian::{
    finite_index_certificate, lattice_index, CertificateBudget, Lattice2,
};
use thompson_core::io::{format_pairs, parse_pairs, to_dot};
use thompson_core::relations::{k_system, k_system_complete};
use thompson_core::saturation::{all_mixed_equivalent, saturate, suffice_failures};
use thompson_core::subgroup::{
    subgroup_branch_pairs, DEFAULT_DEPTH, DEFAULT_ELEMENT_BUDGET, DEFAULT_RADIUS,
};
use thompson_core::verify::{self, Status, SuiteConfig, LEMMA_IDS};
use thompson_core::{abelianize, normal_form, Dyadic, Element, Error};

#[derive(Parser)]
#[command(
    name = "thompson",
    version,
    about = "Computations in Thompson's group F"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where an element comes from when it is not given positionally.
#[derive(Args, Clone, Default)]
struct Input {
    /// Element as an expression, e.g. "x0^2 x1" or "x1^(x0)".
    #[arg(short = 'e', long = "expr", value_name = "EXPR")]
    expr: Option<String>,
    /// Element as a branch-pair file ("u -> v" per line, "-" for stdin).
    #[arg(short = 'f', long = "file", value_name = "FILE")]
    file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Budget {
    /// Ball radius K.
    #[arg(long = "radius", default_value_t = DEFAULT_RADIUS)]
    radius: usize,
    /// Saturation depth L.
    #[arg(long = "depth", default_value_t = DEFAULT_DEPTH)]
    depth: u32,
    /// Largest number of ball elements.
    #[arg(long = "budget", default_value_t = DEFAULT_ELEMENT_BUDGET)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an element at a dyadic point: eval [ELEMENT] POINT.
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(value_name = "ARGS", num_args = 1..=2)]
        args: Vec<String>,
    },
    /// Product of elements, composed left to right.
    Mul {
        #[arg(value_name = "EXPR")]
        exprs: Vec<String>,
        /// Further factors from branch-pair files, after the expressions.
        #[arg(short = 'f', long = "file", value_name = "FILE")]
        files: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Inverse of an element.
    Inv {
        #[command(flatten)]
        input: Input,
        element: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Power of an element: pow [ELEMENT] K.
    #[command(allow_negative_numbers = true)]
    Pow {
        #[command(flatten)]
        input: Input,
        #[arg(value_name = "ARGS", num_args = 1..=2)]
        args: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Reduce a list of branch pairs; pairs may be separated by ';'.
    Reduce {
        #[arg(short = 'f', long = "file", value_name = "FILE")]
        file: Option<PathBuf>,
        pairs: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Reduced branch pairs of an element.
    Branches {
        #[command(flatten)]
        input: Input,
        element: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Normal form in the generators x0, x1, ...
    #[command(name = "normal-form")]
    NormalForm {
        #[command(flatten)]
        input: Input,
        element: Option<String>,
    },
    /// Image (log2 f'(0+), log2 f'(1-)) in Z².
    Abelianize {
        #[command(flatten)]
        input: Input,
        element: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Index of the abelian image of <x^m, y^n> or of the given elements.
    Index {
        #[arg(value_name = "EXPR")]
        exprs: Vec<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        budget: Budget,
        /// Emit the finite-index certificate as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Saturated branch equivalence of a subgroup ball or a relation system.
    Saturate {
        #[arg(value_name = "EXPR")]
        exprs: Vec<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Seed with the relations of K(m, n) instead of a subgroup ball.
        #[arg(long)]
        relations: bool,
        /// With --relations, keep the finite relation families whole.
        #[arg(long)]
        complete: bool,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        json: bool,
        /// List class members in the JSON output.
        #[arg(long)]
        full: bool,
    },
    /// Run the lemma verifiers: verify <LEMMA|all>.
    Verify {
        lemma: String,
        /// Largest m for the branch tables and index.
        #[arg(long)]
        m: Option<usize>,
        /// Largest n for the branch tables and index.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        budget: Budget,
        /// Worker threads (default: number of processors).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Emit JUnit-style XML.
        #[arg(long)]
        junit: bool,
    },
    /// The two trees of an element in DOT.
    Dot {
        #[command(flatten)]
        input: Input,
        element: Option<String>,
    },
    /// Check invariable generation for {x, g⁻¹ y g}.
    #[command(name = "invariable-check")]
    InvariableCheck {
        #[command(flatten)]
        input: Input,
        element: Option<String>,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidDyadic(_) | Error::MalformedDiagram(_) => {
                Failure::Usage(e.to_string())
            }
            Error::CapacityExceeded { .. } | Error::Overflow(_) => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Compute(format!("reading stdin: {}", e)))?;
        return Ok(s);
    }
    fs::read_to_string(path)
        .map_err(|e| Failure::Compute(format!("reading {}: {}", path.display(), e)))
}

fn from_file(path: &PathBuf) -> Result<Element, Failure> {
    Ok(Element::from_pairs(parse_pairs(&read_text(path)?)?)?)
}

fn from_expr(text: &str) -> Result<Element, Failure> {
    Ok(thompson_core::presentation::element_of_expression(text)?)
}

/// The element from `-e`, `-f` or the positional argument; exactly one is allowed.
fn element(input: &Input, positional: Option<&str>) -> Result<Element, Failure> {
    match (&input.expr, &input.file, positional) {
        (Some(e), None, None) => from_expr(e),
        (None, Some(f), None) => from_file(f),
        (None, None, Some(p)) => from_expr(p),
        (None, None, None) => Err(Failure::Usage(
            "an element is required (EXPR, -e or -f)".into(),
        )),
        _ => Err(Failure::Usage(
            "give the element once: EXPR, -e or -f".into(),
        )),
    }
}

/// Splits `[ELEMENT] VALUE` depending on whether `-e`/`-f` is present.
fn element_and_value<'a>(input: &Input, args: &'a [String]) -> Result<(Element, &'a str), Failure> {
    let given = input.expr.is_some() || input.file.is_some();
    match (given, args) {
        (true, [v]) => Ok((element(input, None)?, v)),
        (false, [e, v]) => Ok((element(input, Some(e))?, v)),
        _ => Err(Failure::Usage("expected [ELEMENT] VALUE".into())),
    }
}

fn element_json(f: &Element) -> Value {
    let pairs: Vec<Value> = f
        .pairs()
        .iter()
        .map(|p| json!({"source": p.source.to_string(), "target": p.target.to_string()}))
        .collect();
    let ab = abelianize(f);
    json!({
        "pairs": pairs,
        "normal_form": normal_form(f).to_string(),
        "abelian": [ab.a, ab.b],
    })
}

fn show(f: &Element, as_json: bool) -> String {
    if as_json {
        pretty(&element_json(f))
    } else {
        format_pairs(f)
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn generators(
    exprs: &[String],
    m: Option<usize>,
    n: Option<usize>,
) -> Result<Vec<Element>, Failure> {
    match (exprs.is_empty(), m, n) {
        (false, None, None) => exprs.iter().map(|e| from_expr(e)).collect(),
        (true, Some(m), Some(n)) if m >= 1 && n >= 1 => {
            let x = thompson_core::presentation::x();
            let y = thompson_core::presentation::y();
            Ok(vec![x.power(m as i64), y.power(n as i64)])
        }
        _ => Err(Failure::Usage(
            "give either elements or --m and --n (both >= 1)".into(),
        )),
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Eval { input, args } => {
            let (f, point) = element_and_value(&input, &args)?;
            let t = Dyadic::parse(point)?;
            Ok(format!("{}\n", f.evaluate(&t)))
        }
        Command::Mul { exprs, files, json } => {
            if exprs.is_empty() && files.is_empty() {
                return Err(Failure::Usage("mul needs at least one factor".into()));
            }
            let mut product = Element::identity();
            for e in &exprs {
                product = product.multiply(&from_expr(e)?);
            }
            for f in &files {
                product = product.multiply(&from_file(f)?);
            }
            Ok(show(&product, json))
        }
        Command::Inv {
            input,
            element: e,
            json,
        } => Ok(show(&element(&input, e.as_deref())?.invert(), json)),
        Command::Pow { input, args, json } => {
            let (f, k) = element_and_value(&input, &args)?;
            let k: i64 = k
                .parse()
                .map_err(|_| Failure::Usage(format!("invalid exponent {:?}", k)))?;
            Ok(show(&f.power(k), json))
        }
        Command::Reduce { file, pairs, json } => {
            let text = match (file, pairs) {
                (Some(f), None) => read_text(&f)?,
                (None, Some(p)) => p.replace(';', "\n"),
                _ => return Err(Failure::Usage("give the pairs once: PAIRS or -f".into())),
            };
            Ok(show(&Element::from_pairs(parse_pairs(&text)?)?, json))
        }
        Command::Branches {
            input,
            element: e,
            json,
        } => Ok(show(&element(&input, e.as_deref())?, json)),
        Command::NormalForm { input, element: e } => Ok(format!(
            "{}\n",
            normal_form(&element(&input, e.as_deref())?)
        )),
        Command::Abelianize {
            input,
            element: e,
            json,
        } => {
            let ab = abelianize(&element(&input, e.as_deref())?);
            if json {
                Ok(pretty(&json!([ab.a, ab.b])))
            } else {
                Ok(format!("{}\n", ab))
            }
        }
        Command::Index {
            exprs,
            m,
            n,
            budget,
            json,
        } => {
            let gens = generators(&exprs, m, n)?;
            if json {
                let b = CertificateBudget {
                    radius: budget.radius,
                    depth: budget.depth,
                    max_elements: budget.budget,
                };
                Ok(pretty(&finite_index_certificate(&gens, &b)?.to_json()))
            } else {
                Ok(format!(
                    "{}\n",
                    lattice_index(&Lattice2::of_elements(&gens))?
                ))
            }
        }
        Command::Saturate {
            exprs,
            m,
            n,
            relations,
            complete,
            budget,
            json,
            full,
        } => {
            let seed = if relations {
                let (Some(m), Some(n)) = (m, n) else {
                    return Err(Failure::Usage("--relations needs --m and --n".into()));
                };
                if m == 0 || n == 0 || !exprs.is_empty() {
                    return Err(Failure::Usage(
                        "--relations takes --m, --n >= 1 and no elements".into(),
                    ));
                }
                if complete {
                    k_system_complete(m, n, budget.depth).pairs()
                } else {
                    k_system(m, n, budget.depth).pairs()
                }
            } else {
                let gens = generators(&exprs, m, n)?;
                subgroup_branch_pairs(&gens, budget.radius, budget.depth, budget.budget)?
            };
            let p = saturate(&seed, budget.depth)?;
            if json {
                return Ok(pretty(&p.to_json(full)));
            }
            let l = budget.depth as usize;
            let r = l.saturating_sub(1);
            let fails = suffice_failures(&p, r, r);
            let mut s = format!(
                "depth {}\nseed pairs {}\nclasses {}\n",
                p.depth(),
                seed.len(),
                p.num_classes()
            );
            if fails.is_empty() {
                s.push_str(&format!("sufficiency conditions hold for r, s <= {}\n", r));
            } else {
                s.push_str(&format!(
                    "sufficiency conditions: {} not established\n",
                    fails.len()
                ));
            }
            s.push_str(&format!(
                "mixed words of length <= {} in one class: {}\n",
                l,
                if all_mixed_equivalent(&p, l) {
                    "yes"
                } else {
                    "no"
                }
            ));
            Ok(s)
        }
        Command::Verify {
            lemma,
            m,
            n,
            budget,
            jobs,
            json,
            junit,
        } => {
            let only = match lemma.as_str() {
                "all" => None,
                id if LEMMA_IDS.contains(&id) => Some(id),
                other => {
                    return Err(Failure::Usage(format!(
                        "unknown lemma {:?}; expected all or one of {}",
                        other,
                        LEMMA_IDS.join(", ")
                    )))
                }
            };
            let mut config = SuiteConfig {
                radius: budget.radius,
                depth: budget.depth,
                budget: budget.budget,
                ..SuiteConfig::default()
            };
            if let Some(m) = m {
                config.m_max = m;
            }
            if let Some(n) = n {
                config.n_max = n;
            }
            let threads =
                jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let reports = verify::run_all(&config, only, threads.max(1));
            let out = if junit {
                verify::to_junit(&reports)
            } else if json {
                pretty(&verify::to_json(&reports))
            } else {
                verify::summary_table(&reports)
            };
            if verify::suite_passed(&reports) {
                Ok(out)
            } else {
                print!("{}", out);
                Err(Failure::Compute("some verifications failed".into()))
            }
        }
        Command::Dot { input, element: e } => Ok(to_dot(&element(&input, e.as_deref())?)),
        Command::InvariableCheck {
            input,
            element: e,
            budget,
            json,
        } => {
            let label = match (&input.expr, &input.file, &e) {
                (Some(x), _, _) | (_, _, Some(x)) => x.clone(),
                (_, Some(f), _) => f.display().to_string(),
                _ => String::new(),
            };
            let g = element(&input, e.as_deref())?;
            let r =
                verify::verify_invariable(&label, &g, budget.radius, budget.depth, budget.budget);
            let out = if json {
                pretty(&serde_json::to_value(&r).expect("report serializes"))
            } else {
                let mut s = format!("{}\n", r.status);
                for d in &r.details {
                    s.push_str(&format!("  {}\n", d));
                }
                s
            };
            if r.status == Status::Fail {
                print!("{}", out);
                return Err(Failure::Compute(
                    "invariable generation check failed".into(),
                ));
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}
