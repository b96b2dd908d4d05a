//! Command-line front end.
//!
//! [`run`] parses arguments and returns a [`CommandResult`] instead of
//! printing, so the binary is a thin wrapper and the commands are testable
//! in-process. Exit codes: 0 success, 1 negative answer (infeasible order,
//! invalid realization), 2 input error, 3 enumeration budget exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::builders::{self, Algorithm, BuildError, BuildRequest};
use crate::complex::{self, GraphDocument, GraphError, LabeledMultigraph};
use crate::feasibility::{self, FeasibilityError};
use crate::pot::{self, Pot, SingleBondPot};
use crate::spectrum::{self, ConstructionMatrix, TileDistribution};
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Exit code plus captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        Self::with_code(EXIT_OK, stdout)
    }

    fn with_code(exit_code: i32, stdout: String) -> Self {
        Self {
            exit_code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(exit_code: i32, message: impl std::fmt::Display) -> Self {
        Self {
            exit_code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "flextile", version, about = "Analyze and build complete complexes for flexible-tile pots")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,

    /// Inline pot, e.g. "{a^6};{a*^4};{a*}" (takes precedence over a pot file)
    #[arg(long, global = true)]
    pot: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construction matrix, spectrum and order structure of a pot
    Analyze { potfile: Option<PathBuf> },
    /// Realizable orders 1..=max with witness distributions
    Orders {
        potfile: Option<PathBuf>,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
        max: u64,
    },
    /// Every tile distribution of a given order
    Spectrum {
        potfile: Option<PathBuf>,
        #[arg(long, short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
    },
    /// Construct a connected complex
    Build {
        potfile: Option<PathBuf>,
        #[arg(long, conflicts_with = "distribution", required_unless_present = "distribution")]
        order: Option<u64>,
        /// Tile counts in pot order, e.g. 7,3,19
        #[arg(long)]
        distribution: Option<String>,
        #[arg(long, default_value = "auto", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Validate a graph document against a pot
    Check {
        graphfile: PathBuf,
        potfile: Option<PathBuf>,
    },
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return if err.use_stderr() {
                CommandResult {
                    exit_code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                CommandResult::ok(rendered)
            };
        }
    };
    let json = cli.json;
    let inline = cli.pot.as_deref();
    let outcome = match cli.command {
        Command::Analyze { potfile } => {
            load_pot(inline, potfile.as_ref()).map(|p| analyze(&p, json))
        }
        Command::Orders { potfile, max } => {
            load_pot(inline, potfile.as_ref()).and_then(|p| orders(&p, max, json))
        }
        Command::Spectrum { potfile, order } => {
            load_pot(inline, potfile.as_ref()).and_then(|p| spectrum_cmd(&p, order, json))
        }
        Command::Build {
            potfile,
            order,
            distribution,
            algorithm,
            format,
        } => load_pot(inline, potfile.as_ref()).and_then(|p| {
            let format = if json { Format::Json } else { format };
            build(&p, order, distribution.as_deref(), algorithm, format)
        }),
        Command::Check { graphfile, potfile } => check(&graphfile, inline, potfile.as_ref(), json),
    };
    outcome.unwrap_or_else(|e| e)
}

type Outcome = Result<CommandResult, CommandResult>;

fn read_file(path: &PathBuf) -> Result<String, CommandResult> {
    std::fs::read_to_string(path)
        .map_err(|e| CommandResult::error(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn parse_pot_text(text: &str) -> Result<Pot, CommandResult> {
    pot::parse_pot(text.trim()).map_err(|e| CommandResult::error(EXIT_INPUT, e))
}

fn load_pot(inline: Option<&str>, file: Option<&PathBuf>) -> Result<Pot, CommandResult> {
    match (inline, file) {
        (Some(text), _) => parse_pot_text(text),
        (None, Some(path)) => parse_pot_text(&read_file(path)?),
        (None, None) => Err(CommandResult::error(
            EXIT_INPUT,
            "no pot given: pass a pot file or --pot",
        )),
    }
}

fn single_bond(pot: &Pot) -> Result<SingleBondPot, CommandResult> {
    pot::as_single_bond(pot).map_err(|e| CommandResult::error(EXIT_INPUT, e))
}

fn matrix_json(m: &ConstructionMatrix<Rational>) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|v| json!(v.to_string())).collect()))
            .collect(),
    )
}

fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}\n")).collect()
}

fn analyze(pot: &Pot, json: bool) -> CommandResult {
    let matrix: ConstructionMatrix<Rational> = spectrum::construction_matrix(pot);
    let reduced = matrix.rref();
    let solution = matrix.solve();
    let single = pot::as_single_bond(pot);

    if json {
        let general = solution.as_ref().map(|s| {
            json!({
                "particular": s.particular.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "free_columns": s.free_columns.iter().map(|c| c + 1).collect::<Vec<_>>(),
                "nullspace": s.nullspace.iter()
                    .map(|b| b.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        });
        let single_json = match &single {
            Ok(sb) => {
                let canon = feasibility::canonical_distributions(sb);
                let form = feasibility::division_form(sb);
                json!({
                    "e1": sb.e1(),
                    "e2": sb.e2(),
                    "hat_swapped": sb.hat_swapped(),
                    "spectrum": spectrum::closed_form_text(sb),
                    "d": feasibility::gcd_classifier(sb),
                    "min_order": feasibility::min_order(sb),
                    "eta": feasibility::eta(sb).ok().map(|e| e.to_string()),
                    "zeta": feasibility::zeta(sb),
                    "division_form": {"q": form.q, "r": form.r},
                    "canonical_distributions": {
                        "division": sb.to_pot_order(&canon.division),
                        "star": sb.to_pot_order(&canon.star),
                        "bipartite": sb.to_pot_order(&canon.bipartite),
                    },
                })
            }
            Err(e) => json!({"not_applicable": e.to_string()}),
        };
        let doc = json!({
            "pot": pot.to_string(),
            "construction_matrix": matrix_json(&matrix),
            "rref": matrix_json(&reduced),
            "general_solution": general,
            "single_bond": single_json,
        });
        return CommandResult::ok(render_json(&doc));
    }

    let mut out = String::new();
    let _ = writeln!(out, "pot: {pot}");
    let _ = write!(out, "construction matrix:\n{}", indent(&matrix.to_string()));
    let _ = write!(out, "rref:\n{}", indent(&reduced.to_string()));
    match &solution {
        Some(s) => {
            let fmt_vec = |v: &[Rational]| {
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            };
            let _ = writeln!(out, "particular solution: ({})", fmt_vec(&s.particular));
            for (col, basis) in s.free_columns.iter().zip(&s.nullspace) {
                let _ = writeln!(out, "nullspace direction (free r{}): ({})", col + 1, fmt_vec(basis));
            }
        }
        None => {
            let _ = writeln!(out, "system is inconsistent: the spectrum is empty");
        }
    }
    match single {
        Ok(sb) => {
            let d = feasibility::gcd_classifier(&sb);
            let m = feasibility::min_order(&sb);
            let form = feasibility::division_form(&sb);
            let canon = feasibility::canonical_distributions(&sb);
            let _ = writeln!(out, "spectrum: {}", spectrum::closed_form_text(&sb));
            let _ = writeln!(out, "e1 = {}, e2 = {}", sb.e1(), sb.e2());
            let _ = writeln!(out, "d = gcd(e1+1, e2-1) = {d}");
            let _ = writeln!(out, "m_P = {m}");
            match (feasibility::eta(&sb), feasibility::zeta(&sb)) {
                (Ok(eta), Some(zeta)) => {
                    let _ = writeln!(out, "eta = {eta}");
                    let _ = writeln!(out, "zeta = {zeta}");
                    if Rational::from_integer(zeta as i64) < eta {
                        let _ = writeln!(
                            out,
                            "note: zeta < eta; every order >= eta is realizable, so only orders {m}..{} needed checking",
                            crate::scalar::ceil_rational(&eta) - 1
                        );
                    }
                }
                _ => {
                    let _ = writeln!(out, "eta = not-applicable (d = {d})");
                    let _ = writeln!(out, "zeta = not-applicable (only multiples of {d} are realizable)");
                }
            }
            let _ = writeln!(
                out,
                "division form: e1 = {}*{} + {} (q = {}, r = {})",
                sb.e2(),
                form.q,
                form.r,
                form.q,
                form.r
            );
            let _ = writeln!(out, "canonical distributions:");
            for (name, dist) in [
                ("(1,q,r)", &canon.division),
                ("(1,0,e1)", &canon.star),
                ("(e2,e1,0)", &canon.bipartite),
            ] {
                let _ = writeln!(
                    out,
                    "  {name:<10} {:<12} order {}",
                    sb.to_pot_order(dist).to_string(),
                    dist.order()
                );
            }
        }
        Err(e) => {
            let _ = writeln!(out, "single-bond analysis: not-applicable ({e})");
        }
    }
    CommandResult::ok(out)
}

fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn budget_or_input(e: FeasibilityError) -> CommandResult {
    match e {
        FeasibilityError::BudgetExceeded { .. } => CommandResult::error(EXIT_BUDGET, e),
        _ => CommandResult::error(EXIT_INPUT, e),
    }
}

fn orders(pot: &Pot, max: u64, json: bool) -> Outcome {
    let rows: Vec<(u64, Option<TileDistribution>)> = match pot::as_single_bond(pot) {
        Ok(sb) => feasibility::order_table(&sb, max)
            .into_iter()
            .map(|e| (e.order, e.witness.map(|w| sb.to_pot_order(&w))))
            .collect(),
        Err(_) => (1..=max)
            .map(|n| {
                feasibility::distributions_for_order(pot, n)
                    .map(|d| (n, d.into_iter().next()))
                    .map_err(budget_or_input)
            })
            .collect::<Result<_, _>>()?,
    };
    if json {
        let doc = json!({
            "pot": pot.to_string(),
            "max": max,
            "orders": rows.iter().map(|(n, w)| json!({
                "order": n,
                "realizable": w.is_some(),
                "witness": w,
            })).collect::<Vec<_>>(),
        });
        return Ok(CommandResult::ok(render_json(&doc)));
    }
    let mut out = format!("pot: {pot}\norder  realizable  witness\n");
    for (n, w) in &rows {
        match w {
            Some(w) => {
                let _ = writeln!(out, "{n:>5}  yes         {w}");
            }
            None => {
                let _ = writeln!(out, "{n:>5}  no");
            }
        }
    }
    Ok(CommandResult::ok(out))
}

fn spectrum_cmd(pot: &Pot, order: u64, json: bool) -> Outcome {
    let dists = feasibility::distributions_for_order(pot, order).map_err(budget_or_input)?;
    let code = if dists.is_empty() { EXIT_NEGATIVE } else { EXIT_OK };
    let out = if json {
        render_json(&json!({
            "pot": pot.to_string(),
            "order": order,
            "distributions": dists,
        }))
    } else if dists.is_empty() {
        format!("pot: {pot}\norder {order}: no tile distribution\n")
    } else {
        let mut out = format!("pot: {pot}\norder {order}: {} distribution(s)\n", dists.len());
        for d in &dists {
            let _ = writeln!(out, "  {d}");
        }
        out
    };
    Ok(CommandResult::with_code(code, out))
}

fn build_error(e: BuildError) -> CommandResult {
    match e {
        BuildError::InvalidDistribution { .. } => CommandResult::error(EXIT_INPUT, e),
        _ => CommandResult::error(EXIT_NEGATIVE, e),
    }
}

fn parse_distribution(text: &str) -> Result<TileDistribution, CommandResult> {
    text.split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map(TileDistribution::new)
        .map_err(|_| {
            CommandResult::error(
                EXIT_INPUT,
                format!("--distribution expects comma-separated counts, got {text:?}"),
            )
        })
}

/// Picks a role-ordered distribution of order `n` that `algorithm` accepts.
fn witness_for(sb: &SingleBondPot, n: u64, algorithm: Algorithm) -> Result<TileDistribution, CommandResult> {
    let all = feasibility::single_bond_distributions(sb, n);
    if n == 0 || all.is_empty() {
        return Err(build_error(BuildError::Infeasible(n)));
    }
    let canon = feasibility::canonical_distributions(sb);
    let fits = |d: &TileDistribution| match algorithm {
        Algorithm::Star => *d == canon.star,
        Algorithm::Divalg => *d == canon.division,
        Algorithm::Bipartite => *d == canon.bipartite,
        Algorithm::Cycle => d.count(0) >= 1 && d.count(0) <= d.count(1),
        Algorithm::Path => 1 + d.count(1) * (sb.e2() as u64 - 1) >= d.count(0),
        Algorithm::Auto => true,
    };
    all.into_iter().find(fits).ok_or_else(|| {
        build_error(BuildError::Precondition(format!(
            "no distribution of order {n} satisfies the {algorithm} construction's precondition"
        )))
    })
}

fn build(
    pot: &Pot,
    order: Option<u64>,
    distribution: Option<&str>,
    algorithm: Algorithm,
    format: Format,
) -> Outcome {
    let sb = single_bond(pot)?;
    let graph: LabeledMultigraph = match (order, distribution) {
        (Some(n), _) if algorithm == Algorithm::Auto => builders::build_auto(&sb, n).map_err(build_error)?,
        (Some(n), _) => {
            let dist = witness_for(&sb, n, algorithm)?;
            BuildRequest { pot: sb.clone(), dist, algorithm }
                .build()
                .map_err(build_error)?
        }
        (None, Some(text)) => {
            let dist = parse_distribution(text)?;
            if dist.len() != pot.len() {
                return Err(CommandResult::error(
                    EXIT_INPUT,
                    format!("--distribution needs {} counts, got {}", pot.len(), dist.len()),
                ));
            }
            BuildRequest {
                pot: sb.clone(),
                dist: sb.to_role_order(&dist),
                algorithm,
            }
            .build()
            .map_err(build_error)?
        }
        (None, None) => return Err(CommandResult::error(EXIT_INPUT, "pass --order or --distribution")),
    };
    let source = sb.to_pot();
    let check = complex::validate_realization(&graph, &source)
        .map_err(|e| CommandResult::error(EXIT_NEGATIVE, e))?;
    if !check.ok {
        return Err(CommandResult::error(
            EXIT_NEGATIVE,
            "internal error: constructed graph failed re-validation",
        ));
    }
    let out = match format {
        Format::Dot => graph.to_dot(),
        Format::Json => {
            let mut s = graph.to_json(&source);
            s.push('\n');
            s
        }
    };
    Ok(CommandResult::ok(out))
}

fn check(graphfile: &PathBuf, inline: Option<&str>, potfile: Option<&PathBuf>, json: bool) -> Outcome {
    let doc = GraphDocument::parse(&read_file(graphfile)?).map_err(|e| CommandResult::error(EXIT_INPUT, e))?;
    let pot = match (inline, potfile) {
        (None, None) => parse_pot_text(&doc.pot)?,
        _ => load_pot(inline, potfile)?,
    };
    let graph = doc.graph();
    let realization = match complex::validate_realization(&graph, &pot) {
        Ok(r) => r,
        Err(e @ GraphError::UnknownTile { .. }) => {
            return Err(CommandResult::error(EXIT_NEGATIVE, format!("invalid realization: {e}")))
        }
        Err(e) => return Err(CommandResult::error(EXIT_INPUT, e)),
    };
    let parts = complex::components(&graph);
    let dist = realization
        .ok
        .then(|| complex::tile_distribution_of(&graph, &pot).ok())
        .flatten();
    let single = pot::as_single_bond(&pot).ok();
    let forced = match (&dist, &single) {
        (Some(d), Some(sb)) => Some(complex::forced_disconnected(&sb.to_role_order(d), sb)),
        _ => None,
    };
    let code = if realization.ok { EXIT_OK } else { EXIT_NEGATIVE };

    if json {
        let doc = json!({
            "pot": pot.to_string(),
            "valid": realization.ok,
            "violations": realization.violations,
            "order": graph.order(),
            "edges": graph.edge_count(),
            "distribution": dist,
            "components": parts.len(),
            "connected": parts.len() == 1,
            "forced_disconnected": forced,
        });
        return Ok(CommandResult::with_code(code, render_json(&doc)));
    }

    let mut out = format!("pot: {pot}\n");
    if realization.ok {
        let _ = writeln!(out, "realization: valid");
    } else {
        let _ = writeln!(out, "realization: invalid");
        for v in &realization.violations {
            let _ = writeln!(out, "  {v}");
        }
    }
    let _ = writeln!(out, "order: {}, edges: {}", graph.order(), graph.edge_count());
    if let Some(d) = &dist {
        let _ = writeln!(out, "tile distribution: {d}");
    }
    let _ = writeln!(
        out,
        "components: {}{}",
        parts.len(),
        if parts.len() == 1 { " (connected)" } else { "" }
    );
    if let (Some(d), Some(sb)) = (&dist, &single) {
        let roles = sb.to_role_order(d);
        let lhs = 1 + roles.count(1) * (sb.e2() as u64 - 1);
        let verdict = if forced == Some(true) { "yes" } else { "no" };
        let _ = writeln!(
            out,
            "forced disconnected (1 + R2(e2-1) < R1): {verdict} ({lhs} vs R1 = {})",
            roles.count(0)
        );
    }
    Ok(CommandResult::with_code(code, out))
}
