//! `opacity`: check opacity, NI and INI of models in the plain-text format,
//! run the reductions between them, and audit verdicts with the brute-force
//! oracle.
//!
//! Exit status: 0 when the property holds, 1 when it is violated, 2 on bad
//! input or usage.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opacity_core::automata::incorporate_secret;
use opacity_core::interference::{check_ini, check_ni, IniMethod, InterferenceVerdict};
use opacity_core::observation::ObservationKind;
use opacity_core::opacity::{check_opacity_natural, check_opacity_orwellian, OpacityVerdict, SubVerdict};
use opacity_core::oracle::{oracle_check_opacity, DEFAULT_SECRET_CAP};
use opacity_core::reductions::{ini_to_opacity, opacity_to_ini, opacity_to_ni, ReductionOutput};
use opacity_core::{compile_regex, parse_model, render_model, Error, Lts, Word, F, F_PHI};
use serde_json::json;

#[derive(Parser)]
#[command(name = "opacity", version, about = "Opacity and intransitive non-interference checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of a model.
    Check {
        #[command(subcommand)]
        property: Property,
    },
    /// Translate between opacity and interference problems.
    Reduce {
        #[command(subcommand)]
        reduction: Reduction,
    },
    /// Evaluate opacity by brute force on bounded words.
    Oracle {
        #[command(flatten)]
        input: SecretInput,
        #[arg(long, value_enum)]
        obs: Observer,
        /// Longest secret word examined.
        #[arg(long, default_value_t = DEFAULT_SECRET_CAP)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
}

#[derive(Subcommand)]
enum Property {
    /// Opacity against an observer of the `obs` events.
    Static {
        #[command(flatten)]
        input: SecretInput,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
    /// Opacity against an observer who also learns everything before a `down` event.
    Orwellian {
        #[command(flatten)]
        input: SecretInput,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
    /// Non-interference, reading obs/unobs as Low/High.
    Ni {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
    /// Intransitive non-interference, reading obs/unobs/down as Low/High/Down.
    Ini {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Report::Text)]
        report: Report,
    },
}

#[derive(Subcommand)]
enum Reduction {
    /// Static opacity to NI.
    ToNi {
        #[command(flatten)]
        input: SecretInput,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Orwellian opacity to INI.
    ToIni {
        #[command(flatten)]
        input: SecretInput,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// INI to Orwellian opacity.
    FromIni {
        #[arg(long)]
        system: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct SecretInput {
    #[arg(long)]
    system: PathBuf,
    /// Model whose `Fphi` set (or `F` when absent) recognizes the secret.
    #[arg(long, conflicts_with = "secret_re")]
    secret: Option<PathBuf>,
    /// Secret as a regular expression over the system's events.
    #[arg(long)]
    secret_re: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Observer {
    Natural,
    Orwellian,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Decomposed,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Text,
    JsonLines,
}

/// Failures that end the run with exit status 2.
enum Failure {
    Io(PathBuf, io::Error),
    Input(Option<PathBuf>, Error),
    NoSecret(PathBuf),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Input(Some(path), e) => write!(f, "{}: {e}", path.display()),
            Failure::Input(None, e) => write!(f, "{e}"),
            Failure::NoSecret(path) => write!(
                f,
                "{}: no secret given; pass --secret or --secret-re, or declare `accept Fphi:` in the model",
                path.display()
            ),
        }
    }
}

fn input(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::Input(Some(path.to_path_buf()), e)
}

fn load(path: &Path) -> Result<Lts, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    parse_model(&text).map_err(input(path))
}

/// The system with `F` and `Fphi`, incorporating a separately given secret.
fn load_with_secret(args: &SecretInput) -> Result<Lts, Failure> {
    let system = load(&args.system)?;
    let secret = match (&args.secret, &args.secret_re) {
        (Some(path), _) => {
            let secret = load(path)?;
            let set = if secret.has_accepting(F_PHI) { F_PHI } else { F };
            Some((secret.keep_accepting(&[set]), set))
        }
        (None, Some(pattern)) => {
            Some((compile_regex(pattern, system.alphabet()).map_err(|e| Failure::Input(None, e))?, F))
        }
        (None, None) => None,
    };
    match secret {
        Some((secret, set)) => {
            incorporate_secret(&system.keep_accepting(&[F]), F, &secret, set).map_err(input(&args.system))
        }
        None if system.has_accepting(F_PHI) => Ok(system),
        None => Err(Failure::NoSecret(args.system.clone())),
    }
}

fn render_witness(w: &Word) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.tokens()
    }
}

fn verdict_word(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "violated"
    }
}

fn json_witness(w: &Option<Word>) -> serde_json::Value {
    w.as_ref().map_or(serde_json::Value::Null, |w| json!(w.tokens()))
}

struct Outcome {
    holds: bool,
    witness: Option<Word>,
    /// Extra text-mode lines after the witness line.
    notes: Vec<String>,
    breakdown: Vec<SubVerdict>,
    /// State reported for a check without per-state breakdown.
    state: String,
}

impl Outcome {
    fn from_opacity(v: OpacityVerdict, system: &Lts) -> Self {
        Outcome {
            holds: v.holds,
            witness: v.witness,
            notes: Vec::new(),
            breakdown: v.breakdown,
            state: system.state_name(system.initial()).to_string(),
        }
    }

    fn from_interference(v: InterferenceVerdict, system: &Lts) -> Self {
        let notes = v.preimage.iter().map(|p| format!("preimage: {}", render_witness(p))).collect();
        Outcome {
            holds: v.holds,
            witness: v.witness,
            notes,
            breakdown: v.breakdown,
            state: system.state_name(system.initial()).to_string(),
        }
    }

    fn print(&self, report: Report, out: &mut impl Write) -> io::Result<()> {
        match report {
            Report::Text => {
                writeln!(out, "{}", verdict_word(self.holds))?;
                writeln!(out, "{}", self.witness.as_ref().map(render_witness).unwrap_or_default())?;
                for note in &self.notes {
                    writeln!(out, "{note}")?;
                }
                for sub in &self.breakdown {
                    let witness = sub.witness.as_ref().map(|w| format!(" {}", render_witness(w))).unwrap_or_default();
                    writeln!(out, "state {}: {}{witness}", sub.state, verdict_word(sub.holds))?;
                }
            }
            Report::JsonLines => {
                if self.breakdown.is_empty() {
                    let record = json!({"state": self.state, "holds": self.holds, "witness": json_witness(&self.witness)});
                    writeln!(out, "{record}")?;
                }
                for sub in &self.breakdown {
                    let record = json!({"state": sub.state, "holds": sub.holds, "witness": json_witness(&sub.witness)});
                    writeln!(out, "{record}")?;
                }
            }
        }
        Ok(())
    }

    fn code(&self) -> u8 {
        if self.holds {
            0
        } else {
            1
        }
    }
}

fn write_reduction(out: &ReductionOutput, path: &Path) -> Result<u8, Failure> {
    let lts = out.to_lts().trim();
    fs::write(path, render_model(&lts)).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    let fresh = out.fresh_event.as_ref().map(|h| format!(", fresh High event {h}")).unwrap_or_default();
    println!("wrote {} ({} states{fresh})", path.display(), lts.num_states());
    Ok(0)
}

fn check(property: Property) -> Result<u8, Failure> {
    let (outcome, report) = match property {
        Property::Static { input: args, report } => {
            let system = load_with_secret(&args)?;
            let v = check_opacity_natural(&system).map_err(input(&args.system))?;
            (Outcome::from_opacity(v, &system), report)
        }
        Property::Orwellian { input: args, report } => {
            let system = load_with_secret(&args)?;
            let v = check_opacity_orwellian(&system).map_err(input(&args.system))?;
            (Outcome::from_opacity(v, &system), report)
        }
        Property::Ni { system: path, report } => {
            let system = load(&path)?;
            let v = check_ni(&system).map_err(input(&path))?;
            (Outcome::from_interference(v, &system), report)
        }
        Property::Ini { system: path, method, report } => {
            let system = load(&path)?;
            let method = match method {
                Method::Direct => IniMethod::Direct,
                Method::Decomposed => IniMethod::Decomposed,
                Method::Both => IniMethod::Both,
            };
            let v = check_ini(&system, method).map_err(input(&path))?;
            (Outcome::from_interference(v, &system), report)
        }
    };
    outcome.print(report, &mut io::stdout().lock()).map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))?;
    Ok(outcome.code())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check { property } => check(property),
        Command::Reduce { reduction } => match reduction {
            Reduction::ToNi { input: args, output } => {
                let system = load_with_secret(&args)?;
                let out = opacity_to_ni(&system, &system.alphabet().observable()).map_err(input(&args.system))?;
                write_reduction(&out, &output)
            }
            Reduction::ToIni { input: args, output } => {
                let system = load_with_secret(&args)?;
                let out = opacity_to_ini(&system).map_err(input(&args.system))?;
                write_reduction(&out, &output)
            }
            Reduction::FromIni { system: path, output } => {
                let system = load(&path)?;
                let out = ini_to_opacity(&system).map_err(input(&path))?;
                write_reduction(&out, &output)
            }
        },
        Command::Oracle { input: args, obs, max_len, report } => {
            let system = load_with_secret(&args)?;
            let kind = match obs {
                Observer::Natural => ObservationKind::natural(system.alphabet()),
                Observer::Orwellian => ObservationKind::orwellian(system.alphabet()),
            };
            let v = oracle_check_opacity(&system, &kind, max_len).map_err(input(&args.system))?;
            let mut outcome = Outcome::from_opacity(v, &system);
            outcome.notes.push(format!("secret words examined up to length {max_len}"));
            outcome.print(report, &mut io::stdout().lock()).map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))?;
            Ok(outcome.code())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(2)
        }
    }
}
