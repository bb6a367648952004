use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use convdom_core::{catalog, Class, FunctionExpr, Interval, Kind, QuadConfig, SamplingPlan};

use crate::{Command, RunConfig, Theorem};

#[derive(Debug, Parser)]
#[command(name = "convdom", version)]
#[command(
    about = "Sampled checks for Q(I)/P(I) membership, convex dominance and Hermite-Hadamard type inequalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
#[command(rename_all = "kebab-case")]
pub enum Cmd {
    /// Check membership of f in a function class
    CheckClass {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[command(flatten)]
        common: Common,
    },
    /// Check that f is convex dominated by g (with the g+f / g-f characterization)
    CheckDominated {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Issue a verdict even if g fails its own class check
        #[arg(long)]
        waive_prereq: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate both sides of a Hermite-Hadamard type inequality
    VerifyHh {
        #[arg(long, value_enum)]
        thm: ThmArg,
        #[command(flatten)]
        common: Common,
    },
    /// Build l = g + f and k = g - f and check both for class membership
    Decompose {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the lambda form and the three-point form of the Q condition
    Crosscheck {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Function f, as an expression in x or `@name` for a catalog fixture
    #[arg(long = "f")]
    pub f: String,
    /// Function g (dominance, decomposition, theorems 3 and 4)
    #[arg(long = "g")]
    pub g: Option<String>,
    /// Interval endpoints A < B; defaults to the domain of an `@name` fixture
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    #[arg(long, default_value_t = 41)]
    pub nx: usize,
    #[arg(long, default_value_t = 41)]
    pub nlambda: usize,
    /// Lambda margin for Q checks: lambda is sampled in [eps, 1 - eps]
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Relative slack of every pointwise check
    #[arg(long, default_value_t = 1e-9)]
    pub tau: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "abs-tol", default_value_t = 1e-10)]
    pub abs_tol: f64,
    #[arg(long = "rel-tol", default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Write the JSON report here instead of standard output
    #[arg(long = "json", value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write the (lambda, defect) curve at the worst (x, y) pair here
    #[arg(long = "csv", value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ClassArg {
    Convex,
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "P", alias = "p")]
    P,
    Nonneg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "P", alias = "p")]
    P,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ThmArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    Classical,
}

impl From<ClassArg> for Class {
    fn from(c: ClassArg) -> Class {
        match c {
            ClassArg::Convex => Class::Convex,
            ClassArg::Q => Class::Q,
            ClassArg::P => Class::P,
            ClassArg::Nonneg => Class::Nonnegative,
        }
    }
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Q => Kind::Q,
            KindArg::P => Kind::P,
        }
    }
}

impl From<ThmArg> for Theorem {
    fn from(t: ThmArg) -> Theorem {
        match t {
            ThmArg::One => Theorem::One,
            ThmArg::Two => Theorem::Two,
            ThmArg::Three => Theorem::Three,
            ThmArg::Four => Theorem::Four,
            ThmArg::Classical => Theorem::Classical,
        }
    }
}

/// Resolves `@name` to the fixture's expression text and domain.
fn resolve(text: &str) -> convdom_core::Result<(String, Option<Interval>)> {
    match text.strip_prefix('@') {
        Some(name) => {
            let fix = catalog::fixture(name)?;
            Ok((fix.text.to_string(), Some(fix.interval())))
        }
        None => Ok((text.to_string(), None)),
    }
}

impl Cmd {
    /// Validates the flags and assembles a [`RunConfig`].
    pub fn into_config(self) -> convdom_core::Result<RunConfig> {
        let (command, common) = match self {
            Cmd::CheckClass { class, common } => (Command::CheckClass(class.into()), common),
            Cmd::CheckDominated {
                kind,
                waive_prereq,
                common,
            } => (
                Command::CheckDominated {
                    kind: kind.into(),
                    waive_prereq,
                },
                common,
            ),
            Cmd::VerifyHh { thm, common } => (Command::VerifyHh(thm.into()), common),
            Cmd::Decompose { kind, common } => (Command::Decompose(kind.into()), common),
            Cmd::Crosscheck { common } => (Command::Crosscheck, common),
        };
        let (f_text, f_domain) = resolve(&common.f)?;
        let g = common.g.as_deref().map(resolve).transpose()?;
        let g_domain = g.as_ref().and_then(|(_, iv)| *iv);
        let interval = match (&common.interval, f_domain.or(g_domain)) {
            (Some(v), _) => Interval::new(v[0], v[1])?,
            (None, Some(iv)) => iv,
            (None, None) => {
                return Err(convdom_core::Error::InvalidConfig(
                    "--interval A B is required",
                ))
            }
        };
        let plan = SamplingPlan {
            n_x: common.nx,
            n_lambda: common.nlambda,
            lambda_margin: common.eps,
            tau: common.tau,
            seed: common.seed,
            ..SamplingPlan::default()
        };
        plan.validate()?;
        let quad = QuadConfig::new(
            common.abs_tol,
            common.rel_tol,
            QuadConfig::default().max_subdivisions,
        )?;
        let config = RunConfig {
            command,
            f_text,
            g_text: g.map(|(text, _)| text),
            interval,
            plan,
            quad,
            output_path: common.json,
            csv_path: common.csv,
        };
        config.validate()?;
        // Surface syntax errors before any work is done.
        FunctionExpr::parse(&config.f_text)?;
        if let Some(g) = &config.g_text {
            FunctionExpr::parse(g)?;
        }
        Ok(config)
    }
}
