use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use orbifold_braid::braid::{
    center_full_braid, center_pure_braid, injectivity, BraidGroupId, InjectivityVerdict,
};
use orbifold_braid::center::{center_pi1, CenterVerdict};
use orbifold_braid::free_product::FreeProductContext;
use orbifold_braid::orbifold::{is_nice, OrbifoldSpec, SuborbifoldEmbedding};
use orbifold_braid::presentation::{abelianization, pi1_orb, tietze_simplify, Presentation};
use orbifold_braid::snf::{smith_normal_form, Matrix};
use orbifold_braid::trace::Group;
use orbifold_braid::word::Word;

const EXIT_INVALID: u8 = 2;
const EXIT_OPEN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "orbibraid",
    version,
    about = "Orbifold fundamental groups and orbifold braid groups"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the orbifold fundamental group presentation of a spec.
    Present {
        #[arg(short, long)]
        input: String,
        /// Apply Tietze simplification first.
        #[arg(long)]
        simplify: bool,
    },
    /// Abelian invariants of a spec's group or of an explicit presentation.
    Abelianize {
        #[arg(short, long)]
        input: String,
    },
    /// Decide the center of the orbifold fundamental group.
    Center {
        #[arg(short, long)]
        input: String,
    },
    /// Decide the center of a (pure) orbifold braid group.
    BraidCenter {
        #[arg(short, long)]
        input: String,
        #[arg(short, long)]
        n: u32,
        #[arg(long)]
        pure: bool,
    },
    /// Certify injectivity of the map induced by a sub-orbifold embedding.
    Injectivity {
        #[arg(short, long)]
        input: String,
        #[arg(short, long)]
        n: u32,
        #[arg(short, long)]
        m: u32,
        #[arg(long)]
        pure: bool,
    },
    /// Order of a word in a free product of cyclic groups.
    Order {
        #[arg(short, long)]
        input: String,
        #[arg(short, long)]
        word: String,
    },
    /// Smith normal form of an integer matrix.
    Snf {
        #[arg(short, long)]
        input: String,
    },
    /// Check niceness of a sub-orbifold embedding.
    NiceCheck {
        #[arg(short, long)]
        input: String,
    },
}

/// Failure to read or validate input.
struct InvalidInput(String);

impl From<orbifold_braid::Error> for InvalidInput {
    fn from(e: orbifold_braid::Error) -> Self {
        InvalidInput(e.to_string())
    }
}

impl From<serde_json::Error> for InvalidInput {
    fn from(e: serde_json::Error) -> Self {
        InvalidInput(e.to_string())
    }
}

struct Output {
    text: String,
    json: Value,
    open: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            open: false,
        }
    }
}

/// Reads `source` as inline JSON when it looks like JSON, else as a path.
fn load<T: DeserializeOwned>(source: &str) -> Result<T, InvalidInput> {
    let trimmed = source.trim_start();
    let raw = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        source.to_string()
    } else {
        fs::read_to_string(Path::new(source))
            .map_err(|e| InvalidInput(format!("cannot read {source}: {e}")))?
    };
    Ok(serde_json::from_str(&raw)?)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn braid_id(group: &Group, pure_requested: bool) -> Value {
    match group {
        Group::PureBraid { base, n } => {
            json!({ "base": base, "n": n, "pure": pure_requested || *n > 1 })
        }
        Group::Braid { base, n } => json!({ "base": base, "n": n, "pure": false }),
        other => json!({ "group": other.to_string() }),
    }
}

fn center_output(id: &BraidGroupId, verdict: &CenterVerdict) -> Output {
    let text = format!("{id}: {}\n{}", verdict.status, verdict.trace);
    let json = json!({
        "group": id,
        "status": verdict.status,
        "trace": verdict.trace,
    });
    Output {
        text,
        json,
        open: verdict.status.is_open(),
    }
}

fn injectivity_output(v: &InjectivityVerdict, pure: bool) -> Output {
    let mut text = format!("{} -> {}: {}\n", v.source, v.target, v.status);
    for violation in &v.violations {
        text.push_str(&format!(
            "violation: component {} ({:?})\n",
            violation.component, violation.kind
        ));
    }
    text.push_str(&v.trace.to_string());
    let json = json!({
        "source": braid_id(&v.source, pure),
        "target": braid_id(&v.target, pure),
        "status": v.status,
        "trace": v.trace,
        "violations": v.violations,
    });
    Output::new(text, json)
}

fn run(command: Command) -> Result<Output, InvalidInput> {
    Ok(match command {
        Command::Present { input, simplify } => {
            let spec: OrbifoldSpec = load(&input)?;
            let mut p = pi1_orb(&spec)?;
            if simplify {
                p = tietze_simplify(&p);
            }
            Output::new(p.to_string(), to_value(&p))
        }
        Command::Abelianize { input } => {
            let value: Value = load(&input)?;
            let p: Presentation = if value.get("generators").is_some() {
                serde_json::from_value(value)?
            } else {
                pi1_orb(&serde_json::from_value::<OrbifoldSpec>(value)?)?
            };
            let inv = abelianization(&p);
            Output::new(inv.to_string(), to_value(&inv))
        }
        Command::Center { input } => {
            let spec: OrbifoldSpec = load(&input)?;
            let verdict = center_pi1(&spec)?;
            center_output(&BraidGroupId::new(spec, 1, true)?, &verdict)
        }
        Command::BraidCenter { input, n, pure } => {
            let spec: OrbifoldSpec = load(&input)?;
            let id = BraidGroupId::new(spec.clone(), n, pure)?;
            let verdict = if pure {
                center_pure_braid(&spec, n)?
            } else {
                center_full_braid(&spec, n)?
            };
            center_output(&id, &verdict)
        }
        Command::Injectivity { input, n, m, pure } => {
            let embedding: SuborbifoldEmbedding = load(&input)?;
            injectivity_output(&injectivity(&embedding, n, m, pure)?, pure)
        }
        Command::Order { input, word } => {
            let ctx: FreeProductContext = load(&input)?;
            let w = Word::parse(&word)?;
            let nf = ctx.normal_form(&w)?;
            let order = ctx.order_of(&nf);
            let text = format!("{} has order {order}", nf.to_word());
            let json = json!({ "word": w, "normal_form": nf.to_word(), "order": order });
            Output::new(text, json)
        }
        Command::Snf { input } => {
            let m: Matrix = load(&input)?;
            let s = smith_normal_form(&m, true)?;
            let w = s.witnesses.expect("requested witnesses");
            let factors: Vec<String> = s.factors.iter().map(ToString::to_string).collect();
            let text = format!("invariant factors: [{}]", factors.join(", "));
            let json = json!({
                "factors": s.factors,
                "left": w.left,
                "right": w.right,
                "diagonal": w.diagonal,
            });
            Output::new(text, json)
        }
        Command::NiceCheck { input } => {
            let embedding: SuborbifoldEmbedding = load(&input)?;
            let report = is_nice(&embedding);
            let mut text = format!("nice: {}", report.nice);
            for v in &report.violations {
                text.push_str(&format!(
                    "\nviolation: component {} ({:?})",
                    v.component, v.kind
                ));
            }
            Output::new(text, to_value(&report))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json values serialize")
                );
            } else {
                println!("{}", out.text.trim_end());
            }
            if out.open {
                ExitCode::from(EXIT_OPEN)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(InvalidInput(message)) => {
            if cli.json {
                println!("{}", json!({ "error": message }));
            }
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
