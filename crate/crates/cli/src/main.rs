use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fourpc_core::basis::{build_basis, star_basis, BasisSet, ChoicePolicy};
use fourpc_core::linalg::{bareiss_det, bigint_json, exact_rank, smith_normal_form, symmetric_inertia, BigIntMatrix};
use fourpc_core::pair_matrix::{build_matrix, MatrixKind, Pair};
use fourpc_core::tree::{leaf_profile, parse_inline_edges, parse_tree, random_tree, Tree};
use fourpc_core::verify::{sweep, verify_tree, CheckId, SampleSpec, SweepConfig};

/// Exact Max4PC / Min4PC / 2-Steiner pair matrices of trees.
#[derive(Parser, Debug)]
#[command(name = "fourpc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TreeInput {
    /// Edge-list file; standard input when neither this nor --edges is given.
    #[arg(short, long, conflicts_with = "edges")]
    input: Option<PathBuf>,
    /// Inline edges, e.g. "1-2,2-3".
    #[arg(long)]
    edges: Option<String>,
}

#[derive(Args, Debug)]
struct OutputArg {
    /// Write here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Max4pc,
    Min4pc,
    Steiner2,
}

impl From<Kind> for MatrixKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Max4pc => MatrixKind::Max4pc,
            Kind::Min4pc => MatrixKind::Min4pc,
            Kind::Steiner2 => MatrixKind::Steiner2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a pair matrix.
    Matrix {
        #[command(flatten)]
        tree: TreeInput,
        #[command(flatten)]
        out: OutputArg,
        #[arg(long, value_enum, default_value = "max4pc")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact rank of a pair matrix.
    Rank {
        #[command(flatten)]
        tree: TreeInput,
        #[command(flatten)]
        out: OutputArg,
        #[arg(long, value_enum, default_value = "max4pc")]
        kind: Kind,
    },
    /// Smith normal form invariant factors, zeros first.
    Snf {
        #[command(flatten)]
        tree: TreeInput,
        #[command(flatten)]
        out: OutputArg,
        #[arg(long, value_enum, default_value = "max4pc")]
        kind: Kind,
    },
    /// Exact inertia (zero, positive, negative).
    Inertia {
        #[command(flatten)]
        tree: TreeInput,
        #[command(flatten)]
        out: OutputArg,
        #[arg(long, value_enum, default_value = "max4pc")]
        kind: Kind,
    },
    /// Build a row basis of Max4PC by block traversal.
    Basis {
        #[command(flatten)]
        tree: TreeInput,
        #[command(flatten)]
        out: OutputArg,
        /// 1-based pendant vertex to start from; defaults to the smallest.
        #[arg(long)]
        start_leaf: Option<usize>,
        /// min, random, random:SEED or prefer:I-J,...
        #[arg(long, default_value = "min")]
        policy: String,
        /// Seed used when the policy is a bare "random".
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact determinant of Max4PC[B,B].
    Det {
        #[command(flatten)]
        tree: TreeInput,
        #[command(flatten)]
        out: OutputArg,
        /// A basis JSON document, or a text file of pairs such as "1-2 1-4".
        #[arg(long, conflicts_with = "pairs", required_unless_present = "pairs")]
        basis: Option<PathBuf>,
        /// Inline pairs, e.g. "1-2,1-3".
        #[arg(long)]
        pairs: Option<String>,
    },
    /// Run the checks on one tree.
    Verify {
        #[command(flatten)]
        tree: TreeInput,
        #[command(flatten)]
        out: OutputArg,
        /// Comma-separated check ids; all checks by default.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<CheckId>,
    },
    /// Run the checks over exhaustive and sampled corpora.
    Sweep {
        #[command(flatten)]
        out: OutputArg,
        /// Every labeled tree with 3 <= n <= N.
        #[arg(long, default_value_t = 5)]
        exhaustive: usize,
        /// n:count:seed, repeatable.
        #[arg(long)]
        sample: Vec<SampleSpec>,
        #[arg(long, value_delimiter = ',')]
        checks: Vec<CheckId>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Include per-check wall-clock totals in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Emit a uniformly random labeled tree in edge-list format.
    Gen {
        #[command(flatten)]
        out: OutputArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_tree(input: &TreeInput) -> Result<Tree> {
    if let Some(edges) = &input.edges {
        return parse_inline_edges(edges).context("parsing --edges");
    }
    let text = match &input.input {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading standard input")?;
            s
        }
    };
    Ok(parse_tree(&text)?)
}

fn emit(out: &OutputArg, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_json(out: &OutputArg, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

fn matrix_big(t: &Tree, kind: Kind) -> Result<BigIntMatrix> {
    Ok(BigIntMatrix::from_pair_matrix(&build_matrix(t, kind.into())?))
}

fn parse_pairs(text: &str) -> Result<Vec<Pair>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Pair>().map_err(|e| anyhow::anyhow!("bad pair {s:?}: {e}")))
        .collect()
}

fn read_basis_pairs(path: &PathBuf) -> Result<Vec<Pair>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let basis: BasisSet = serde_json::from_str(&text).context("parsing basis JSON")?;
        return Ok(basis.pairs);
    }
    parse_pairs(&text)
}

fn basis_for(t: &Tree, start_leaf: Option<usize>, policy: &str, seed: u64) -> Result<BasisSet> {
    let policy = match policy {
        "random" => ChoicePolicy::Random(seed),
        other => other.parse::<ChoicePolicy>().map_err(anyhow::Error::msg)?,
    };
    let leaves = leaf_profile(t).pendants;
    let start = match start_leaf {
        Some(0) => bail!("vertex labels start at 1"),
        Some(l) => l - 1,
        None => *leaves.first().context("tree has no pendant vertex")?,
    };
    if t.is_star() {
        let others: Vec<usize> = leaves.iter().copied().filter(|&v| v != start).take(2).collect();
        if others.len() < 2 {
            bail!("star needs three leaves besides the center");
        }
        return Ok(star_basis(t, start, others[0], others[1])?);
    }
    Ok(build_basis(t, start, &policy)?)
}

fn checks_or_all(checks: Vec<CheckId>) -> Vec<CheckId> {
    if checks.is_empty() {
        CheckId::ALL.to_vec()
    } else {
        checks
    }
}

/// `Ok(false)` means a check failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Matrix { tree, out, kind, format } => {
            let m = build_matrix(&read_tree(&tree)?, kind.into())?;
            match format {
                Format::Csv => emit(&out, &m.to_csv())?,
                Format::Json => emit_json(&out, &m.to_json())?,
            }
        }
        Command::Rank { tree, out, kind } => {
            let t = read_tree(&tree)?;
            let rank = exact_rank(&matrix_big(&t, kind)?);
            emit_json(&out, &json!({ "kind": MatrixKind::from(kind), "n": t.n(), "rank": rank }))?;
        }
        Command::Snf { tree, out, kind } => {
            let snf = smith_normal_form(&matrix_big(&read_tree(&tree)?, kind)?);
            emit_json(&out, &snf.to_json())?;
        }
        Command::Inertia { tree, out, kind } => {
            let inertia = symmetric_inertia(&matrix_big(&read_tree(&tree)?, kind)?)?;
            emit_json(&out, &inertia)?;
        }
        Command::Basis { tree, out, start_leaf, policy, seed } => {
            let t = read_tree(&tree)?;
            emit_json(&out, &basis_for(&t, start_leaf, &policy, seed)?)?;
        }
        Command::Det { tree, out, basis, pairs } => {
            let t = read_tree(&tree)?;
            let pairs = match (basis, pairs) {
                (Some(path), _) => read_basis_pairs(&path)?,
                (None, Some(text)) => parse_pairs(&text)?,
                (None, None) => bail!("one of --basis or --pairs is required"),
            };
            if pairs.is_empty() {
                bail!("empty pair list");
            }
            let m = build_matrix(&t, MatrixKind::Max4pc)?;
            let sub = BigIntMatrix::from_rows(&m.submatrix(&pairs, &pairs)?);
            let det = bareiss_det(&sub)?;
            emit_json(&out, &json!({ "pairs": pairs, "det": bigint_json(&det) }))?;
        }
        Command::Verify { tree, out, checks } => {
            let t = read_tree(&tree)?;
            if t.n() < 2 {
                bail!("verify needs at least 2 vertices");
            }
            let results = verify_tree(&t, &checks_or_all(checks));
            let pass = results.iter().all(|c| c.pass);
            let profile = leaf_profile(&t);
            emit_json(&out, &json!({ "n": t.n(), "p": profile.p, "checks": results }))?;
            return Ok(pass);
        }
        Command::Sweep { out, exhaustive, sample, checks, jobs, timing } => {
            let cfg = SweepConfig {
                max_exhaustive_n: exhaustive,
                samples: sample,
                checks: checks_or_all(checks),
                jobs,
                include_timing: timing,
                ..SweepConfig::default()
            };
            let report = sweep(&cfg);
            emit_json(&out, &report)?;
            return Ok(report.failures() == 0);
        }
        Command::Gen { out, n, seed } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            emit(&out, &random_tree(n, seed).to_edge_list())?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
