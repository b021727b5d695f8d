use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use elemgroups::cli::{error_exit_code, load_spec, parse_matrix, parse_suites, run_suite, SuiteConfig, Task};
use elemgroups::finite::DEFAULT_CAP;
use elemgroups::formring::FormRing;
use elemgroups::rings::Ring;
use elemgroups::sampling::SampleConfig;
use elemgroups::{Error, Result};

#[derive(Parser)]
#[command(name = "elemgroups", version, about = "Exact checks for elementary and unitary elementary matrix groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Ring spec as JSON or @file, e.g. {"kind":"modular","m":5}
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Form ring spec as JSON or @file
    #[arg(long, global = true)]
    form: Option<String>,
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,
    /// Element cap for closure searches
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Random cases per identity over infinite rings
    #[arg(long, global = true, default_value_t = 20)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here ("-" for stdout)
    #[arg(long, global = true)]
    json: Option<String>,
    /// Include per-check wall time in the JSON report
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites (comma or space separated, or "all")
    Verify { suites: Vec<String> },
    /// Enumerate a finite matrix group
    Closure {
        /// e, gl, eu, a or b
        #[arg(long, default_value = "e")]
        group: String,
    },
    /// Normal closure in E_n(R) of a matrix (JSON or @file), default e_12(1)
    NormalClosure {
        #[arg(long)]
        element: Option<String>,
    },
    /// Is E_n(R) perfect?
    Perfect,
    /// Stable range condition sr_m
    Sr {
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Lambda-stable range condition
    LambdaSr {
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// [GL_k : E_k] for k = n, n + 1
    K1,
    /// [U_2k : EU_2k] for k = n, n + 1
    Ku1,
}

fn build(cmd: &Command, common: &Common) -> Result<SuiteConfig> {
    let ring = common.ring.as_deref().map(|s| Ring::from_json(&load_spec(s)?)).transpose()?;
    let form = common.form.as_deref().map(|s| FormRing::from_json(&load_spec(s)?)).transpose()?;
    if let (Some(r), Some(f)) = (&ring, &form) {
        if r != f.base() {
            return Err(Error::Spec("--ring and --form name different rings".into()));
        }
    }
    let task = match cmd {
        Command::Verify { suites } => Task::Verify(parse_suites(suites, form.is_some())?),
        Command::Closure { group } => Task::Closure(group.parse()?),
        Command::NormalClosure { element } => {
            let m = match element {
                Some(text) => {
                    let r = ring.as_ref().or(form.as_ref().map(FormRing::base)).ok_or_else(|| {
                        Error::Spec("normal-closure needs --ring or --form".into())
                    })?;
                    Some(parse_matrix(r, &load_spec(text)?)?)
                }
                None => None,
            };
            Task::NormalClosure(m)
        }
        Command::Perfect => Task::Perfect,
        Command::Sr { m } => Task::Sr(*m),
        Command::LambdaSr { m } => Task::LambdaSr(*m),
        Command::K1 => Task::K1,
        Command::Ku1 => Task::Ku1,
    };
    Ok(SuiteConfig {
        task,
        ring,
        form,
        n: common.n,
        sample: SampleConfig {
            trials: common.trials,
            seed: common.seed,
        },
        cap: common.cap,
    })
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let code = match build(&args.command, &args.common).and_then(|cfg| run_suite(&cfg)) {
        Ok(report) => {
            print!("{}", report.summary());
            match &args.common.json {
                Some(path) if path == "-" => print!("{}", report.to_json(args.common.timings)),
                Some(path) => {
                    if let Err(e) = std::fs::write(path, report.to_json(args.common.timings)) {
                        eprintln!("error: cannot write {path}: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => {}
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
