//! The `cosettree` command line. Reports are JSON on stdout; diagnostics go
//! to stderr. Exit status 0 on success, 2 on invalid input, 1 on an internal
//! invariant violation.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify, read_spec_json};
use crate::trees::{
    full_tree, gamma_with_report, height, iterate_derivative, orbit_equivalent, phi, rank_table,
    read_tree_json, tree_to_json, Caps, FrontierMode, LevelTree, RankValue,
};
use crate::universal::{a_n, embedding_plan, h_infinity, verify_plan};
use crate::witness::{rank_profile, read_profile_json, staircase_witness, Profile, WitnessSpec};
use crate::FORMAT_TAG;

#[derive(Debug, Parser)]
#[command(
    name = "cosettree",
    version,
    about = "Coset trees and tameness of abelian Polish groups"
)]
pub struct Cli {
    /// Frontier semantics for derivatives and ranks.
    #[arg(long, global = true, default_value = "closed", value_parser = parse_mode)]
    pub mode: FrontierMode,
    /// Cap on tree sizes: both |H^d| and the node count.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_mode(s: &str) -> Result<FrontierMode, String> {
    s.parse()
        .map_err(|_| format!("expected closed or open, found {s:?}"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a product or filtration spec.
    Classify { spec: PathBuf },
    /// Group/coset predicates, height and the rank of every node.
    AnalyzeTree { tree: PathBuf },
    /// Iterated derivative of a tree.
    Derivative {
        tree: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// The canonical group tree of a coset tree.
    Gamma { tree: PathBuf },
    /// The tree of partial translators carrying the first tree to the second.
    Phi {
        tree: PathBuf,
        other: PathBuf,
        #[arg(long)]
        ambient: Option<PathBuf>,
    },
    /// Decide whether two trees are translates of each other at full depth.
    Orbit {
        tree: PathBuf,
        other: PathBuf,
        #[arg(long)]
        ambient: Option<PathBuf>,
    },
    /// Generate a staircase group tree over levels Z(p)^D.
    Witness {
        #[arg(long)]
        p: u64,
        #[arg(long = "dim")]
        dim: usize,
        #[arg(long)]
        depth: usize,
        /// Profile sidecar file; defaults to the staircase profile.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Embedding plan of a tame product into the universal product.
    EmbedPlan {
        spec: PathBuf,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
    },
    /// The factor H_n of the universal product.
    Hinf { n: usize },
}

/// Failure of a command, mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

fn invalid(path: &Path) -> impl Fn(String) -> CliError + '_ {
    move |m| CliError::Invalid(format!("{}: {m}", path.display()))
}

impl<E: Into<crate::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Invalid(e.into().to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| invalid(path)(e.to_string()))
}

fn caps(cli: &Cli) -> Caps {
    match cli.cap {
        None => Caps::default(),
        Some(c) => Caps {
            order: c,
            nodes: usize::try_from(c).unwrap_or(usize::MAX),
        },
    }
}

fn load_tree(path: &Path, caps: Caps) -> Result<LevelTree, CliError> {
    read_tree_json(&read(path)?, caps).map_err(|e| invalid(path)(e.to_string()))
}

fn tagged(v: impl Serialize) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))?;
    match v.as_object_mut() {
        Some(obj) => {
            obj.insert("format".into(), Value::from(FORMAT_TAG));
            Ok(v)
        }
        None => Err(CliError::Internal("report is not a JSON object".into())),
    }
}

fn ensure(cond: bool, what: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Internal(format!("invariant violated: {what}")))
    }
}

fn mode_name(m: FrontierMode) -> &'static str {
    match m {
        FrontierMode::ClosedWorld => "closed",
        FrontierMode::OpenFrontier => "open",
    }
}

fn tree_report(t: &LevelTree) -> Result<Value, CliError> {
    ensure(t.is_prefix_closed(), "output tree is prefix-closed")?;
    serde_json::to_value(tree_to_json(t)).map_err(|e| CliError::Internal(e.to_string()))
}

fn rank_levels(t: &LevelTree, mode: FrontierMode) -> (String, Vec<Value>) {
    let table = rank_table(t, mode);
    let levels = (1..=t.depth())
        .map(|n| {
            let nodes: Vec<Value> = table
                .level(n)
                .iter()
                .zip(t.nodes_at(n))
                .map(|((_, rank), node)| {
                    json!({
                        "node": crate::trees::node_to_json(t.structure(), &node),
                        "rank": rank,
                    })
                })
                .collect();
            json!({
                "level": n,
                "max_finite_rank": table.max_finite(n),
                "core_nodes": table.core_count(n),
                "nodes": nodes,
            })
        })
        .collect();
    (table.height.to_string(), levels)
}

/// Executes one parsed command and returns its JSON report.
pub fn execute(cli: &Cli) -> Result<Value, CliError> {
    let caps = caps(cli);
    let mode = cli.mode;
    match &cli.command {
        Command::Classify { spec } => {
            let s = read_spec_json(&read(spec)?).map_err(|e| invalid(spec)(e.to_string()))?;
            let report = classify(&s)?;
            ensure(
                report.tame == report.obstructions.is_empty(),
                "tame iff no obstructions",
            )?;
            let mut v = tagged(&report)?;
            v["spec"] = serde_json::to_value(&s).map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(v)
        }
        Command::AnalyzeTree { tree } => {
            let t = load_tree(tree, caps)?;
            let (h, levels) = rank_levels(&t, mode);
            ensure(
                h == height(&t, mode).to_string(),
                "height agrees with rank table",
            )?;
            tagged(json!({
                "mode": mode_name(mode),
                "depth": t.depth(),
                "node_count": t.node_count(),
                "is_group_tree": t.is_group_tree(),
                "is_coset_tree": t.is_coset_tree(),
                "height": h,
                "ranks": levels,
            }))
        }
        Command::Derivative { tree, steps } => {
            let t = load_tree(tree, caps)?;
            let seq = iterate_derivative(&t, mode);
            let result = &seq[(*steps).min(seq.len() - 1)];
            let mut v = tree_report(result)?;
            v["steps"] = json!(steps);
            v["mode"] = json!(mode_name(mode));
            v["fixpoint_reached"] = json!(*steps >= seq.len() - 1);
            Ok(v)
        }
        Command::Gamma { tree } => {
            let t = load_tree(tree, caps)?;
            let (g, report) = gamma_with_report(&t)?;
            ensure(g.is_group_tree(), "gamma output is a group tree")?;
            let mut v = tree_report(&g)?;
            v["zero_filled_levels"] = json!(report.zero_filled_levels);
            Ok(v)
        }
        Command::Phi {
            tree,
            other,
            ambient,
        }
        | Command::Orbit {
            tree,
            other,
            ambient,
        } => {
            let s = load_tree(tree, caps)?;
            let s2 = load_tree(other, caps)?;
            let amb = match ambient {
                Some(p) => load_tree(p, caps)?,
                None => full_tree(s.structure(), caps)?,
            };
            if matches!(cli.command, Command::Phi { .. }) {
                tree_report(&phi(&s, &s2, &amb)?)
            } else {
                let d = orbit_equivalent(&s, &s2, &amb)?;
                tagged(json!({
                    "equivalent_at_depth": d.equivalent_at_depth,
                    "translator": d
                        .translator
                        .as_ref()
                        .map(|x| crate::trees::node_to_json(s.structure(), x)),
                }))
            }
        }
        Command::Witness {
            p,
            dim,
            depth,
            profile,
        } => {
            let profile = match profile {
                None => Profile::staircase(*dim, *depth),
                Some(path) => {
                    read_profile_json(&read(path)?).map_err(|e| invalid(path)(e.to_string()))?
                }
            };
            let spec = WitnessSpec {
                p: *p,
                dim: *dim,
                depth: *depth,
                profile,
            };
            let t = staircase_witness(&spec, caps)?;
            ensure(t.is_group_tree(), "witness is a group tree")?;
            let rows = rank_profile(&spec, mode, caps)?;
            let root = t.structure().node(vec![vec![0; *dim]])?;
            let root_rank = match crate::trees::rank_of(&t, &root, mode)? {
                RankValue::Fin(o) => json!(o),
                RankValue::Core => json!("core"),
            };
            tagged(json!({
                "p": p,
                "dim": dim,
                "depth": depth,
                "mode": mode_name(mode),
                "profile": spec.profile.rows(),
                "is_group_tree": true,
                "root_rank": root_rank,
                "rank_profile": rows,
                "tree": tree_report(&t)?,
            }))
        }
        Command::EmbedPlan { spec, horizon } => {
            let s = read_spec_json(&read(spec)?).map_err(|e| invalid(spec)(e.to_string()))?;
            let plan = embedding_plan(&s, *horizon)?;
            ensure(verify_plan(&plan), "plan verifies")?;
            let mut v = tagged(&plan)?;
            v["verified"] = json!(true);
            Ok(v)
        }
        Command::Hinf { n } => {
            let h = h_infinity(*n);
            tagged(json!({
                "n": n,
                "h_n": h,
                "a_n": a_n(*n),
                "torsion": h.is_torsion(),
                // H_n is p_i-compact exactly for i < n
                "p_compact_below_prime_index": n,
            }))
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing the report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
            if writeln!(out, "{text}").is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let msg = match &e {
                CliError::Invalid(m) => format!("error: {m}"),
                CliError::Internal(m) => format!("internal error: {m}"),
            };
            let _ = writeln!(err, "{msg}");
            e.exit_code()
        }
    }
}
