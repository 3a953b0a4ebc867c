use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ergolab::{Budget, LadderKind, LadderVertex, Rational};
use num_complex::Complex64;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphArg {
    G0,
    Gk,
    Combined,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum NumericMode {
    #[default]
    Exact,
    Float,
}

/// How Cesàro means of ladder orbits are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Closed form when the start vector is the entry unit vector.
    #[default]
    Auto,
    /// The generic running-sum engine.
    Engine,
    /// The closed-form orbit; requires the entry unit vector.
    ClosedForm,
}

#[derive(Debug, Parser)]
#[command(name = "ergolab", version, about = "Exact experiments on ladder-graph and block-diagonal operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = NumericMode::Exact, global = true)]
    pub mode: NumericMode,
    /// Cap on operator applications.
    #[arg(long, default_value_t = Budget::default().max_steps, global = true)]
    pub max_steps: u64,
    /// Cap on the support of any intermediate vector.
    #[arg(long, default_value_t = Budget::default().max_support, global = true)]
    pub max_support: usize,
}

#[derive(Debug, Args)]
pub struct GraphSel {
    #[arg(long, value_enum)]
    pub graph: GraphArg,
    /// Copy index for `--graph gk`.
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Truncated power norms ‖Tⁿ 1_{E_N}‖∞.
    Norms {
        #[command(flatten)]
        graph: GraphSel,
        /// Largest power reported.
        #[arg(long)]
        n_max: u64,
        /// Truncation size N of the vertex window.
        #[arg(long)]
        trunc: u64,
        /// Fail if any norm exceeds this.
        #[arg(long)]
        bound: Option<Rational>,
    },
    /// Sink coordinates of the entry orbit against the closed-form predicate.
    Orbit {
        #[command(flatten)]
        graph: GraphSel,
        /// Last step of the orbit.
        #[arg(long)]
        n_max: u64,
        /// Largest copy reported for the combined graph.
        #[arg(long, default_value_t = 4)]
        k_max: u32,
    },
    /// Sup norms of Cesàro means of powers or rotations.
    Cesaro {
        #[command(flatten)]
        graph: GraphSel,
        /// Start vector: `e_s` (the entry vertex) or `e_<vertex>`.
        #[arg(long, default_value = "e_s")]
        x: String,
        /// Exponents m of the averaged powers Tᵐ.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        powers: Vec<u64>,
        /// Increasing list of averaging lengths n.
        #[arg(long, value_delimiter = ',', required = true)]
        schedule: Vec<u64>,
        /// Unimodular scalar: `1`, `-1`, `i`, `-i` or `re,im`.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, value_enum, default_value_t = Route::Auto)]
        route: Route,
        /// Fail if a norm at the last scheduled n exceeds this.
        #[arg(long)]
        threshold: Option<Rational>,
        /// Fail unless norms strictly decrease along the schedule.
        #[arg(long)]
        decreasing: bool,
    },
    /// Block-diagonal operator: uniform deviations or the b-coefficients.
    Block {
        /// Number of blocks.
        #[arg(long, default_value_t = 1000)]
        m: u32,
        /// Averaging lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// Exponent applied to every block.
        #[arg(long, default_value_t = 1)]
        p: u32,
        /// Exponent `2j` of the even power in diagonal mode.
        #[arg(long)]
        j: Option<u32>,
        /// Report b(n, n, j) for each n instead of deviations.
        #[arg(long, requires = "j")]
        sweep_diag: bool,
        /// Lower bound asserted in diagonal mode; defaults to 2/(5j).
        #[arg(long)]
        min: Option<Rational>,
        /// Upper bound asserted on deviations; defaults to 2/n for odd p.
        #[arg(long)]
        bound: Option<Rational>,
    },
    /// Runs the acceptance suite.
    Verify {
        /// Criterion numbers to run; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

/// The start vector of a Cesàro sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StartVector {
    Entry,
    Unit(LadderVertex),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Lambda {
    Exact(Rational),
    Complex(Complex64),
}

impl Lambda {
    pub fn label(&self) -> String {
        match self {
            Lambda::Exact(r) => r.to_string(),
            Lambda::Complex(c) => format!("{}{:+}i", c.re, c.im),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Norms {
        kind: LadderKind,
        n_max: u64,
        trunc: u64,
        bound: Option<Rational>,
    },
    Orbit {
        kind: LadderKind,
        n_max: u64,
        k_max: u32,
    },
    Cesaro {
        kind: LadderKind,
        x: StartVector,
        powers: Vec<u64>,
        schedule: Vec<u64>,
        lambda: Lambda,
        route: Route,
        threshold: Option<Rational>,
        decreasing: bool,
    },
    Block {
        block_count: u32,
        n: Vec<u32>,
        p: u32,
        diag_j: Option<u32>,
        min: Option<Rational>,
        bound: Option<Rational>,
    },
    Verify {
        only: Vec<u8>,
    },
}

/// A fully resolved run. Identical configs give identical exact output.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub budget: Budget,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub mode: NumericMode,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn resolve_kind(sel: &GraphSel) -> Result<LadderKind, CliError> {
    match (sel.graph, sel.k) {
        (GraphArg::G0, None) => Ok(LadderKind::G0),
        (GraphArg::Combined, None) => Ok(LadderKind::Combined),
        (GraphArg::Gk, Some(k)) if k >= 1 => Ok(LadderKind::Gk(k)),
        (GraphArg::Gk, Some(_)) => Err(usage("--k must be at least 1 (use --graph g0 for k = 0)")),
        (GraphArg::Gk, None) => Err(usage("--graph gk needs --k")),
        (_, Some(_)) => Err(usage("--k only applies to --graph gk")),
    }
}

fn parse_start(s: &str) -> Result<StartVector, CliError> {
    let body = s.strip_prefix("e_").unwrap_or(s);
    match body {
        "s" | "o" | "entry" => Ok(StartVector::Entry),
        v => v
            .parse::<LadderVertex>()
            .map(StartVector::Unit)
            .map_err(|e| usage(format!("--x: {e}"))),
    }
}

pub fn parse_lambda(s: &str) -> Result<Lambda, CliError> {
    let t = s.trim();
    match t {
        "1" | "+1" => return Ok(Lambda::Exact(Rational::ONE)),
        "-1" => return Ok(Lambda::Exact(-Rational::ONE)),
        "i" | "+i" => return Ok(Lambda::Complex(Complex64::new(0.0, 1.0))),
        "-i" => return Ok(Lambda::Complex(Complex64::new(0.0, -1.0))),
        _ => {}
    }
    let (re, im) = t
        .split_once(',')
        .ok_or_else(|| usage(format!("--lambda: expected 1, -1, i, -i or re,im, got {s:?}")))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| usage(format!("--lambda: bad number {x:?}")));
    let z = Complex64::new(parse(re)?, parse(im)?);
    if (z.norm() - 1.0).abs() > ergolab::ergodic::ROTATION_MODULUS_TOLERANCE {
        return Err(usage(format!("--lambda: |λ| = {} is not 1", z.norm())));
    }
    Ok(Lambda::Complex(z))
}

fn check_schedule(name: &str, xs: &[u64]) -> Result<(), CliError> {
    if xs.is_empty() || xs[0] == 0 || xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(usage(format!("{name} must be a nonempty, strictly increasing list of positive integers")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let budget = Budget {
            max_steps: cli.max_steps,
            max_support: cli.max_support,
        };
        let float_ok = matches!(cli.command, CommandArgs::Cesaro { .. });
        if cli.mode == NumericMode::Float && !float_ok {
            return Err(usage("--mode float only applies to cesaro"));
        }
        let command = match cli.command {
            CommandArgs::Norms {
                graph,
                n_max,
                trunc,
                bound,
            } => {
                if n_max == 0 {
                    return Err(usage("--n-max must be at least 1"));
                }
                if trunc == 0 {
                    return Err(usage("--trunc must be at least 1"));
                }
                Command::Norms {
                    kind: resolve_kind(&graph)?,
                    n_max,
                    trunc,
                    bound,
                }
            }
            CommandArgs::Orbit { graph, n_max, k_max } => Command::Orbit {
                kind: resolve_kind(&graph)?,
                n_max,
                k_max,
            },
            CommandArgs::Cesaro {
                graph,
                x,
                powers,
                schedule,
                lambda,
                route,
                threshold,
                decreasing,
            } => {
                if powers.is_empty() || powers.contains(&0) {
                    return Err(usage("--powers must be positive"));
                }
                check_schedule("--schedule", &schedule)?;
                let x = parse_start(&x)?;
                let mut lambda = parse_lambda(&lambda)?;
                if cli.mode == NumericMode::Float {
                    if let Lambda::Exact(r) = &lambda {
                        lambda = Lambda::Complex(Complex64::new(r.to_f64(), 0.0));
                    }
                }
                if matches!(lambda, Lambda::Complex(_)) && route == Route::Engine {
                    return Err(usage("complex --lambda is only supported by the closed-form route"));
                }
                if route == Route::ClosedForm && x != StartVector::Entry {
                    return Err(usage("--route closed-form requires --x e_s"));
                }
                if matches!(lambda, Lambda::Complex(_)) && x != StartVector::Entry {
                    return Err(usage("complex --lambda requires --x e_s"));
                }
                Command::Cesaro {
                    kind: resolve_kind(&graph)?,
                    x,
                    powers,
                    schedule,
                    lambda,
                    route,
                    threshold,
                    decreasing,
                }
            }
            CommandArgs::Block {
                m,
                n,
                p,
                j,
                sweep_diag,
                min,
                bound,
            } => {
                if m == 0 || p == 0 || n.contains(&0) {
                    return Err(usage("--m, --n and --p must be positive"));
                }
                if j == Some(0) {
                    return Err(usage("--j must be positive"));
                }
                if j.is_some() && !sweep_diag {
                    return Err(usage("--j is used with --sweep-diag"));
                }
                Command::Block {
                    block_count: m,
                    n,
                    p,
                    diag_j: if sweep_diag { j } else { None },
                    min,
                    bound,
                }
            }
            CommandArgs::Verify { only } => {
                if let Some(bad) = only.iter().find(|&&i| !(1..=12).contains(&i)) {
                    return Err(usage(format!("no criterion {bad}")));
                }
                Command::Verify { only }
            }
        };
        Ok(RunConfig {
            command,
            budget,
            format: cli.format,
            out: cli.out,
            mode: cli.mode,
        })
    }

    pub fn parse_from<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(|e| usage(e.to_string()))?;
        Self::from_cli(cli)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig, CliError> {
        RunConfig::parse_from(std::iter::once("ergolab").chain(args.split_whitespace()))
    }

    #[test]
    fn graph_selection() {
        let c = parse("orbit --graph gk --k 2 --n-max 70").unwrap();
        assert_eq!(
            c.command,
            Command::Orbit {
                kind: LadderKind::Gk(2),
                n_max: 70,
                k_max: 4
            }
        );
        assert!(parse("orbit --graph gk --n-max 3").is_err());
        assert!(parse("orbit --graph g0 --k 1 --n-max 3").is_err());
        assert!(parse("orbit --graph g7 --n-max 3").is_err());
        assert!(parse("norms --graph g0 --n-max 0 --trunc 30").is_err());
    }

    #[test]
    fn cesaro_flags() {
        let c = parse("cesaro --graph combined --x e_s --powers 1,2,3 --schedule 128,256 --lambda -1 --format json")
            .unwrap();
        assert_eq!(c.format, Format::Json);
        match c.command {
            Command::Cesaro { powers, lambda, x, .. } => {
                assert_eq!(powers, vec![1, 2, 3]);
                assert_eq!(lambda, Lambda::Exact(-Rational::ONE));
                assert_eq!(x, StartVector::Entry);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("cesaro --graph combined --schedule 4,2").is_err());
        assert!(parse("cesaro --graph combined --schedule 4 --lambda 0.5,0.5").is_err());
        assert!(parse("cesaro --graph combined --schedule 4 --lambda i --route engine").is_err());
        assert!(parse("cesaro --graph combined --schedule 4 --x e_E(1) --route closed-form").is_err());
        assert!(parse("cesaro --graph combined --schedule 4 --x e_T(0,1)").is_ok());
        assert!(parse("block --n 10 --mode float").is_err());
    }

    #[test]
    fn lambdas() {
        assert_eq!(parse_lambda("i").unwrap(), Lambda::Complex(Complex64::new(0.0, 1.0)));
        assert!(matches!(parse_lambda("0.6,0.8").unwrap(), Lambda::Complex(_)));
        assert!(parse_lambda("2").is_err());
    }
}
