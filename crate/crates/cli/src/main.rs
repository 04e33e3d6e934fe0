use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use diskcut::construction::{
    apply_clause_shifts, audit_constants, build_representation, parse_representation,
    serialize_representation, AuxMode, ConstructionParams, ShiftMode, DEFAULT_DELTA_H,
    DEFAULT_DELTA_V, DEFAULT_EPS, UNITS_PER_RADIUS,
};
use diskcut::extraction::{extract_graph, extract_quotient};
use diskcut::formula::{
    brute_force_max_xor, maxcut_to_xor3, parse_formula, parse_formula_with_vars, validate_xor_k,
    CubicGraph, Formula,
};
use diskcut::render::{render_svg, RenderOptions};
use diskcut::solve::{exhaustive_bisection, kernighan_lin, verify_theorem, VerifyMode};
use diskcut::Graph;

const EXIT_FAIL: u8 = 2;
const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "diskcut",
    version,
    about = "Unit-disk bisection reduction toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a formula into a representation document.
    Reduce {
        #[arg(long)]
        formula: PathBuf,
        /// Variable count; defaults to the largest index in the formula.
        #[arg(long)]
        vars: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Extract the intersection graph (DIMACS) or its quotient.
    Extract {
        #[arg(long)]
        input: PathBuf,
        /// Emit the atom quotient instead of the full graph.
        #[arg(long)]
        quotient: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Audit every distance class for the given parameters.
    Audit {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
    },
    /// Build, extract and check the full reduction for one formula.
    Verify {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        vars: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimum bisection of a DIMACS graph.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive Max-XOR of a formula.
    Maxxor {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Turn a cubic DIMACS graph into a monotone XOR(3) formula.
    MaxcutReduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a representation as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
        /// Draw each crowd as one dashed outline with its size.
        #[arg(long)]
        collapse: bool,
        #[arg(long, default_value_t = 20)]
        pixels_per_radius: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    /// Small crowd size.
    #[arg(short, long, default_value_t = 1)]
    a: u64,
    /// Large crowd size.
    #[arg(short, long, default_value_t = 1)]
    b: u64,
    /// Crowd half-spread in radii (at most four decimals).
    #[arg(long, value_parser = parse_length)]
    eps: Option<i64>,
    /// Upward shift of the horizontal clause disk, in radii.
    #[arg(long, value_parser = parse_length)]
    delta_h: Option<i64>,
    /// Rightward shift of the vertical clause disk, in radii.
    #[arg(long, value_parser = parse_length)]
    delta_v: Option<i64>,
    #[arg(long, value_enum, default_value_t = ModeChoice::Corrected)]
    aux_mode: ModeChoice,
    #[arg(long, value_enum, default_value_t = ModeChoice::Corrected)]
    shift_mode: ModeChoice,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeChoice {
    Corrected,
    PaperLiteral,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    QuotientOnly,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exhaustive,
    Kl,
    Both,
}

impl ParamArgs {
    fn build(&self, n: usize) -> ConstructionParams {
        let mut p = ConstructionParams::new(n, self.a, self.b);
        p.eps = self.eps.unwrap_or(DEFAULT_EPS);
        p.delta_h = self.delta_h.unwrap_or(DEFAULT_DELTA_H);
        p.delta_v = self.delta_v.unwrap_or(DEFAULT_DELTA_V);
        p.aux_mode = match self.aux_mode {
            ModeChoice::Corrected => AuxMode::Corrected,
            ModeChoice::PaperLiteral => AuxMode::PaperLiteral,
        };
        p.shift_mode = match self.shift_mode {
            ModeChoice::Corrected => ShiftMode::Corrected,
            ModeChoice::PaperLiteral => ShiftMode::PaperLiteral,
        };
        p
    }
}

/// Parses a non-negative decimal length in radii into grid units.
fn parse_length(s: &str) -> Result<i64, String> {
    let digits = UNITS_PER_RADIUS.to_string().len() - 1;
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > digits {
        return Err(format!("at most {digits} decimals are representable"));
    }
    let ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if whole.is_empty() && frac.is_empty() || !ok(whole) || !ok(frac) {
        return Err(format!("'{s}' is not a non-negative decimal"));
    }
    let whole: i64 = if whole.is_empty() {
        0
    } else {
        whole.parse().map_err(|e| format!("{e}"))?
    };
    let frac: i64 = format!("{frac:0<digits$}")
        .parse()
        .map_err(|e| format!("{e}"))?;
    whole
        .checked_mul(UNITS_PER_RADIUS)
        .and_then(|w| w.checked_add(frac))
        .ok_or_else(|| "length too large".to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("cannot write to stdout"),
    }
}

fn distinct(input: &Path, output: Option<&Path>) -> Result<()> {
    if output == Some(input) {
        bail!("output path must differ from the input path");
    }
    Ok(())
}

fn load_formula(path: &Path, vars: Option<usize>) -> Result<Formula> {
    let text = read(path)?;
    let f = match vars {
        Some(n) => parse_formula_with_vars(&text, n),
        None => parse_formula(&text),
    };
    f.with_context(|| format!("in formula {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::parse_dimacs(&read(path)?).with_context(|| format!("in graph {}", path.display()))
}

/// Runs one subcommand; `Ok(false)` means a check failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Reduce {
            formula,
            vars,
            params,
            output,
        } => {
            distinct(&formula, output.as_deref())?;
            let f = load_formula(&formula, vars)?;
            let v = validate_xor_k(&f, 3);
            if !v.accepted() {
                bail!(
                    "formula is not monotone XOR(3): variables {:?}",
                    v.offenders
                );
            }
            let p = params.build(f.n());
            let r = apply_clause_shifts(&build_representation(&p)?, &f)?;
            emit(output.as_deref(), &serialize_representation(&r))?;
            Ok(true)
        }
        Command::Extract {
            input,
            quotient,
            output,
        } => {
            distinct(&input, output.as_deref())?;
            let r = parse_representation(&read(&input)?)?;
            let text = if quotient {
                extract_quotient(&r)?.to_text()
            } else {
                extract_graph(&r)?.to_dimacs()
            };
            emit(output.as_deref(), &text)?;
            Ok(true)
        }
        Command::Audit { n, params, json } => {
            let p = params.build(n);
            p.validate()?;
            let rep = audit_constants(&p);
            let text = if json {
                serde_json::to_string_pretty(&rep)? + "\n"
            } else {
                rep.to_text()
            };
            emit(None, &text)?;
            Ok(rep.pass)
        }
        Command::Verify {
            formula,
            vars,
            params,
            mode,
            json,
            output,
        } => {
            distinct(&formula, output.as_deref())?;
            let f = load_formula(&formula, vars)?;
            let p = params.build(f.n());
            let mode = match mode {
                ModeArg::Full => VerifyMode::Full,
                ModeArg::QuotientOnly => VerifyMode::QuotientOnly,
                ModeArg::Auto => VerifyMode::Auto,
            };
            let rep = match verify_theorem(&f, &p, mode) {
                Ok(rep) => rep,
                Err(e) => {
                    eprintln!("verify: {e}");
                    return Ok(false);
                }
            };
            let text = if json { rep.to_json() } else { rep.to_text() };
            emit(output.as_deref(), &text)?;
            Ok(rep.pass)
        }
        Command::Solve {
            graph,
            method,
            seed,
        } => {
            let g = load_graph(&graph)?;
            let mut out = format!("vertices {} edges {}\n", g.vertex_count(), g.edge_count());
            if method != Method::Kl {
                out += &format!("exhaustive {}\n", exhaustive_bisection(&g)?.value);
            }
            if method != Method::Exhaustive {
                out += &format!(
                    "kernighan-lin seed {seed} {}\n",
                    kernighan_lin(&g, seed)?.value
                );
            }
            emit(None, &out)?;
            Ok(true)
        }
        Command::Maxxor { formula, vars } => {
            let f = load_formula(&formula, vars)?;
            let (k, w) = brute_force_max_xor(&f)?;
            emit(
                None,
                &format!(
                    "n {} m {} k_max {k} witness {}\n",
                    f.n(),
                    f.m(),
                    w.to_bit_string()
                ),
            )?;
            Ok(true)
        }
        Command::MaxcutReduce { graph, output } => {
            distinct(&graph, output.as_deref())?;
            let g = CubicGraph::new(load_graph(&graph)?)?;
            emit(output.as_deref(), &maxcut_to_xor3(&g).to_text())?;
            Ok(true)
        }
        Command::Render {
            input,
            collapse,
            pixels_per_radius,
            output,
        } => {
            distinct(&input, output.as_deref())?;
            let r = parse_representation(&read(&input)?)?;
            let opts = RenderOptions {
                collapse_crowds: collapse,
                pixels_per_radius,
            };
            emit(output.as_deref(), &render_svg(&r, &opts))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| c.is::<io::Error>()) {
                ExitCode::from(EXIT_IO)
            } else {
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_parse_exactly() {
        assert_eq!(parse_length("0.0005"), Ok(5));
        assert_eq!(parse_length("5.6"), Ok(56_000));
        assert_eq!(parse_length(".012"), Ok(120));
        assert_eq!(parse_length("2"), Ok(20_000));
        assert!(parse_length("0.00001").is_err());
        assert!(parse_length("-1").is_err());
        assert!(parse_length(".").is_err());
    }
}
