//! `powops`: batch front end for the power-operation engine.
//!
//! Exit codes: 0 when every assertion of the invocation holds, 1 when one
//! fails, 2 for usage and input errors, 3 for internal errors.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(
    name = "powops",
    version,
    about = "Exact algebra of power operations at height 2, prime 2"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Precision {
    /// 2-adic precision exponent.
    #[arg(long, default_value_t = 20)]
    prec2: u32,
    /// Precision in the parameter `a`.
    #[arg(long = "precA", default_value_t = 16)]
    prec_a: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Admissible normal form of a word, e.g. "Q1 Q0".
    Nf {
        expr: String,
        /// leftmost, rightmost, or random:SEED.
        #[arg(long, default_value = "leftmost")]
        strategy: String,
    },
    /// Product of two elements of Γ.
    Mul { left: String, right: String },
    /// Action of an element of Γ on R (`--on`) or on a module basis vector.
    Act {
        gamma: String,
        /// Element of R = Z[a].
        #[arg(long, conflicts_with = "module")]
        on: Option<String>,
        /// Module: R, omega, omega^n, sums such as "R + omega", or JSON.
        #[arg(long)]
        module: Option<String>,
        /// Basis index in the module.
        #[arg(long, default_value_t = 0)]
        basis: usize,
    },
    /// Tensor product of two modules, with the relation check.
    Tensor { left: String, right: String },
    /// θ in the free amplified Γ-ring, e.g. "x y" or "t Q[1] x".
    Theta {
        expr: String,
        /// Generator window as THETA,WORD.
        #[arg(long, default_value = "2,3")]
        window: String,
    },
    /// Trace, norm, M, ℓ or Ψ in R, S or Ŝ.
    Norm {
        #[arg(long, default_value = "N")]
        op: String,
        #[arg(long, default_value = "R")]
        ring: String,
        x: String,
        #[command(flatten)]
        prec: Precision,
    },
    /// The logarithm ℓ.
    Ell {
        #[arg(long, default_value = "S")]
        ring: String,
        x: String,
        #[command(flatten)]
        prec: Precision,
    },
    /// Koszul complex computations.
    Koszul {
        #[command(subcommand)]
        action: KoszulCommand,
    },
    /// Tor^Γ(Γ/I, ω^k).
    Tor(TorArgs),
    /// Expansion of the isogeny in the uniformizer u.
    Isogeny {
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Relations of Γ derived from the total operation.
    Derive {
        #[arg(long)]
        what: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// The full acceptance suite.
    VerifyAll,
    /// Norm and logarithm operators.
    Normlog {
        #[command(subcommand)]
        action: NormlogCommand,
    },
    /// Curve, isogeny and derivations.
    Elliptic {
        #[command(subcommand)]
        action: EllipticCommand,
    },
}

#[derive(Args, Debug)]
struct TorArgs {
    #[arg(long)]
    k: usize,
    /// q, f2 or z; all available rings when omitted.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Subcommand, Debug)]
enum KoszulCommand {
    Tor(TorArgs),
    /// Homology of the filtration levels up to `--kmax`.
    Acyclic {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long, default_value = "q")]
        field: String,
    },
}

#[derive(Subcommand, Debug)]
enum NormlogCommand {
    Eval {
        #[arg(long)]
        op: String,
        #[arg(long)]
        ring: String,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        prec: Precision,
    },
}

#[derive(Subcommand, Debug)]
enum EllipticCommand {
    Isogeny {
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    Derive {
        #[arg(long)]
        what: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    Verify {
        /// Run every check.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
}

fn dispatch(cli: Cli) -> powops::error::Result<Outcome> {
    use commands::*;
    let json = cli.json;
    match cli.command {
        Command::Nf { expr, strategy } => nf(&expr, &strategy, json),
        Command::Mul { left, right } => mul(&left, &right, json),
        Command::Act {
            gamma,
            on,
            module,
            basis,
        } => act(&gamma, on.as_deref(), module.as_deref(), basis, json),
        Command::Tensor { left, right } => tensor(&left, &right, json),
        Command::Theta { expr, window } => theta(&expr, &window, json),
        Command::Norm { op, ring, x, prec } => norm(&op, &ring, &x, prec.prec2, prec.prec_a, json),
        Command::Ell { ring, x, prec } => norm("ell", &ring, &x, prec.prec2, prec.prec_a, json),
        Command::Normlog {
            action: NormlogCommand::Eval { op, ring, x, prec },
        } => norm(&op, &ring, &x, prec.prec2, prec.prec_a, json),
        Command::Tor(t)
        | Command::Koszul {
            action: KoszulCommand::Tor(t),
        } => tor(t.k, t.field.as_deref(), json),
        Command::Koszul {
            action:
                KoszulCommand::Acyclic {
                    module,
                    kmax,
                    field,
                },
        } => acyclic(&module, kmax, &field, json),
        Command::Isogeny { order }
        | Command::Elliptic {
            action: EllipticCommand::Isogeny { order },
        } => isogeny(order, json),
        Command::Derive { what, order }
        | Command::Elliptic {
            action: EllipticCommand::Derive { what, order },
        } => derive(&what, order, json),
        Command::Elliptic {
            action: EllipticCommand::Verify { all, order },
        } => elliptic_verify(all, order, json),
        Command::VerifyAll => verify_all(json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = std::panic::catch_unwind(|| dispatch(cli));
    match result {
        Ok(Ok(out)) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
        Err(_) => ExitCode::from(3),
    }
}
