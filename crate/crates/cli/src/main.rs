use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symlen::certificate::load_hom;
use symlen::commands::{cmd_analyze, cmd_bounds, cmd_factor, cmd_lvalue, cmd_massey, cmd_oracle, cmd_verify};
use symlen::formats::{default_registry, registry_from_json, BlockJson, CertificateJson, GroupJson, HomFile};
use symlen::{render, CliError, Format};
use symlen_core::construction::Registry;
use symlen_core::fpgroup::DEFAULT_CAP;

#[derive(Parser)]
#[command(name = "symlen", version, about = "Factor homomorphisms of elementary-type pro-p groups and bound symbol lengths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Element cap for group enumeration (oracle: state cap).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Worker threads for the l-value search.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    /// Block registry file; defaults to the built-in blocks T, A, B, D (and S for p = 2).
    #[arg(long, global = true)]
    blocks: Option<PathBuf>,
    /// Prime for the built-in block registry.
    #[arg(long, global = true)]
    p: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Extension rank, principal tuples and presentation size of a construction.
    Analyze { construction: String },
    /// Order of a largest abelian subgroup of a target group.
    Lvalue {
        #[arg(long)]
        group: String,
    },
    /// Factor a homomorphism and emit a certificate.
    Factor {
        #[arg(long)]
        hom: PathBuf,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Re-verify a certificate from its contents alone.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// The bound f(e, n) for a construction or f(l(G), n) for a target group.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        construction: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// Use this value of l instead of searching.
        #[arg(long)]
        l: Option<u32>,
    },
    /// Symbol-length bound for pulled-back Massey classes.
    Massey {
        #[arg(long)]
        m: usize,
        /// Compute l of the corner quotient exactly instead of using the analytic bound.
        #[arg(long)]
        exact_l: bool,
    },
    /// Exact symbol lengths on the degree-2 cohomology of a construction.
    Oracle {
        construction: String,
        /// Comma-separated coordinates of a class to query.
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<u64>>,
    },
}

fn registry(common: &Common, fallback_p: Option<u64>) -> Result<Registry, CliError> {
    match (&common.blocks, common.p.or(fallback_p)) {
        (Some(path), _) => {
            let blocks: Vec<BlockJson> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            registry_from_json(&blocks)
        }
        (None, Some(p)) => default_registry(p),
        (None, None) => Err(CliError::Parse("give --blocks or --p".into())),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let c = &cli.common;
    let format = match c.format {
        OutFormat::Json => Format::Json,
        OutFormat::Table => Format::Table,
    };
    let cap = c.cap.unwrap_or(DEFAULT_CAP);
    match cli.command {
        Command::Analyze { construction } => Ok(render(&cmd_analyze(&construction, &registry(c, None)?)?, format)),
        Command::Lvalue { group } => Ok(render(&cmd_lvalue(&GroupJson::from_arg(&group)?, cap, c.threads as usize)?, format)),
        Command::Factor { hom, cert } => {
            let file: HomFile = serde_json::from_str(&std::fs::read_to_string(&hom)?)?;
            let reg = match &file.blocks {
                Some(_) => Registry::new(),
                None => registry(c, Some(file.target.prime()))?,
            };
            let rho = load_hom(&file, &reg, cap)?;
            let out = render(&cmd_factor(&rho, &file.target)?, Format::Json);
            match cert {
                Some(path) => {
                    std::fs::write(&path, &out)?;
                    Ok(String::new())
                }
                None => Ok(out),
            }
        }
        Command::Verify { cert } => {
            let file: CertificateJson = serde_json::from_str(&std::fs::read_to_string(&cert)?)?;
            Ok(render(&cmd_verify(&file, cap)?, format))
        }
        Command::Bounds { n, construction, group, l } => {
            let group = group.map(|g| GroupJson::from_arg(&g)).transpose()?;
            let reg = registry(c, group.as_ref().map(|g| g.prime()))?;
            Ok(render(&cmd_bounds(n, construction.as_deref(), group.as_ref(), &reg, l, cap)?, format))
        }
        Command::Massey { m, exact_l } => {
            let p = c.p.ok_or_else(|| CliError::Parse("massey needs --p".into()))?;
            Ok(render(&cmd_massey(m, p, exact_l, cap)?, format))
        }
        Command::Oracle { construction, omega } => {
            Ok(render(&cmd_oracle(&construction, &registry(c, None)?, c.cap, omega.as_deref())?, format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
