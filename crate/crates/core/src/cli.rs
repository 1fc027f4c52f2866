//! Command-line front end. Every subcommand is a pure function of its
//! arguments, so identical invocations print identical bytes.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::experiments::{
    count_projective_zeros, estimate_word_prob, exact_power_word_prob_sn, pgl_word_prob_bound, round_sig,
    run_girth_experiment, shortest_law, sn_power_prob_lower_bound, sn_word_prob_bound, split_product,
    union_bound_threshold, wn_order_experiment, BoundKind, ExperimentConfig, ExperimentError, HomogeneousPoly,
    LawOutcome, DEFAULT_NODE_CAP,
};
use crate::genetics::{greedy_lineage, population_first_free, DEFAULT_POPULATION_CAP};
use crate::girth::{girth, GeneratorTuple, GirthError, GirthResult, DEFAULT_MAX_GIRTH, DEFAULT_MEMORY_LIMIT};
use crate::groups::{Family, GroupContext};
use crate::parallel::{map_indexed, mix64};
use crate::with_group;
use crate::words::parse_word_minimal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "cayley-girth", version, about = "Girth and word maps of random Cayley graphs")]
pub struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct GroupArgs {
    /// sym, sl2, pgl2 or wn.
    #[arg(long)]
    pub group: Family,
    /// Prime for sl2/pgl2, degree for sym, height for wn.
    #[arg(long = "p", visible_alias = "n")]
    pub param: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AmoebaMode {
    Population,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundChoice {
    /// `(2ℓ/n)^{n/2ℓ}` for words in `Sym(n)`.
    Sn,
    /// Leading term `ℓ/p` for `PGL_2(F_p)`.
    Pgl,
    /// Exact `P(σ^ℓ = 1)` in `Sym(n)` with both bounds.
    SnPower,
    /// Union-bound girth guarantee in `PGL_2(F_p)`.
    PglThreshold,
    /// Union-bound girth guarantee in `Sym(n)`.
    SnThreshold,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Girth of one random Cayley graph.
    Girth {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_GIRTH)]
        max_girth: usize,
        #[arg(long, default_value_t = DEFAULT_MEMORY_LIMIT)]
        memory_limit: usize,
    },
    /// Girth histogram over independent random Cayley graphs.
    Experiment {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_GIRTH)]
        max_girth: usize,
        #[arg(long, default_value_t = DEFAULT_MEMORY_LIMIT)]
        memory_limit: usize,
    },
    /// Monte Carlo estimate of P(w = 1) at uniform random tuples.
    Wordprob {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// First generation with a free amoeba.
    Amoeba {
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = AmoebaMode::Population)]
        mode: AmoebaMode,
        #[arg(long, default_value_t = 30)]
        max_gen: u32,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value_t = DEFAULT_POPULATION_CAP)]
        population_cap: usize,
    },
    /// Word-map probability bounds and union-bound girth guarantees.
    Bounds {
        #[arg(long, value_enum)]
        kind: BoundChoice,
        /// Prime for pgl bounds, degree for sn bounds.
        #[arg(long = "p", visible_alias = "n")]
        param: u64,
        /// Word length.
        #[arg(long, default_value_t = 1)]
        len: u64,
        /// Cayley graph degree for thresholds.
        #[arg(long, default_value_t = 4)]
        degree: u64,
    },
    /// Shortest law of a small group.
    Law {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 16)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
    },
    /// Projective zeros of a homogeneous polynomial over F_p.
    Zeros {
        #[arg(long)]
        p: u64,
        /// Number of variables.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Polynomial such as "x0*x1 - 2*x2^2".
        #[arg(long, conflicts_with = "split")]
        poly: Option<String>,
        /// Roots c_i of the product of (x0 - c_i x1), comma separated.
        #[arg(long, value_delimiter = ',')]
        split: Option<Vec<u64>>,
    },
    /// Distribution of log2(order)/n for uniform elements of W_n.
    OrderStats {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        CliError { code: e.exit_code(), message: e.to_string() }
    }
}

fn config_error(e: impl std::fmt::Display) -> CliError {
    CliError { code: 2, message: e.to_string() }
}

/// Prints floats with 12 significant digits.
fn fixed(x: f64) -> String {
    format!("{:.11e}", x)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn json_float(x: f64) -> serde_json::Value {
    json!(round_sig(x))
}

/// Runs one invocation and returns what it prints.
pub fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Girth { group, k, max_girth, memory_limit } => run_girth(cli, group, *k, *max_girth, *memory_limit),
        Command::Experiment { group, k, trials, max_girth, memory_limit } => {
            let cfg = ExperimentConfig {
                family: group.group,
                param: group.param,
                k: *k,
                trials: *trials,
                seed: cli.seed,
                max_girth: *max_girth,
                threads: cli.threads,
                memory_limit: *memory_limit,
            };
            let h = run_girth_experiment(&cfg)?;
            Ok(match cli.format {
                Format::Json => {
                    let mut s = h.to_json();
                    s.push('\n');
                    s
                }
                Format::Csv => h.to_csv(),
                Format::Text => h.to_table(),
            })
        }
        Command::Wordprob { group, word, trials } => {
            let ctx = GroupContext::new(group.group, group.param).map_err(config_error)?;
            let w = parse_word_minimal(word).map_err(config_error)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let est = with_group!(&ctx, g => estimate_word_prob(g, &w, *trials, &mut rng))?;
            let rows = [
                ("group", json!(group.group)),
                ("param", json!(group.param)),
                ("word", json!(w.to_string())),
                ("trials", json!(est.trials)),
                ("hits", json!(est.hits)),
                ("estimate", json_float(est.estimate)),
                ("ci99_lower", json_float(est.lower)),
                ("ci99_upper", json_float(est.upper)),
            ];
            Ok(render_rows(cli.format, &rows))
        }
        Command::Amoeba { word, mode, max_gen, runs, population_cap } => {
            run_amoeba(cli, word, *mode, *max_gen, *runs, *population_cap)
        }
        Command::Bounds { kind, param, len, degree } => run_bounds(cli.format, *kind, *param, *len, *degree),
        Command::Law { group, k, max_len, node_cap } => {
            let ctx = GroupContext::new(group.group, group.param).map_err(config_error)?;
            let out = with_group!(&ctx, g => shortest_law(g, *k, *max_len, *node_cap))?;
            let (length, word, bound) = match &out {
                LawOutcome::Found { length, word } => (json!(length), json!(word.to_string()), json!(length)),
                LawOutcome::AtLeast { bound } => (json!(null), json!(null), json!(bound)),
            };
            let rows = [
                ("group", json!(group.group)),
                ("param", json!(group.param)),
                ("k", json!(k)),
                ("length", length),
                ("word", word),
                ("lower_bound", bound),
            ];
            Ok(render_rows(cli.format, &rows))
        }
        Command::Zeros { p, m, poly, split } => {
            let f = match (poly, split) {
                (Some(text), None) => HomogeneousPoly::parse(text, *m, *p)?,
                (None, Some(roots)) => split_product(*p, *m, roots)?,
                _ => return Err(config_error("give exactly one of --poly and --split")),
            };
            let z = count_projective_zeros(&f)?;
            let rows = [
                ("poly", json!(f.to_string())),
                ("p", json!(p)),
                ("m", json!(m)),
                ("degree", json!(f.degree())),
                ("zeros", json!(z.zeros)),
                ("points", json!(z.points)),
                ("bound", json!(z.bound)),
                ("within_bound", json!(z.within_bound)),
            ];
            Ok(render_rows(cli.format, &rows))
        }
        Command::OrderStats { n, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let s = wn_order_experiment(*n, *trials, &mut rng)?;
            match cli.format {
                Format::Json => Ok(to_json(&json!({
                    "n": s.n,
                    "trials": s.trials,
                    "counts": s.counts,
                    "alpha_hat": json_float(s.alpha_hat),
                    "std_error": json_float(s.std_error),
                }))),
                Format::Csv => {
                    let mut out = String::from("log2_order,ratio,count\n");
                    for (j, c) in s.counts.iter().enumerate() {
                        let _ = writeln!(out, "{j},{},{c}", fixed(j as f64 / s.n as f64));
                    }
                    Ok(out)
                }
                Format::Text => {
                    let mut out = format!("W_{} orders over {} samples\n", s.n, s.trials);
                    for (j, c) in s.counts.iter().enumerate() {
                        let _ = writeln!(out, "2^{j:<3} {c:>8}");
                    }
                    let _ = writeln!(out, "alpha_hat = {} +- {}", fixed(s.alpha_hat), fixed(s.std_error));
                    Ok(out)
                }
            }
        }
    }
}

fn render_rows(format: Format, rows: &[(&str, serde_json::Value)]) -> String {
    let plain = |v: &serde_json::Value| match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) if n.is_f64() => fixed(n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    };
    match format {
        Format::Json => to_json(&rows.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<serde_json::Map<_, _>>()),
        Format::Csv => {
            let header: Vec<&str> = rows.iter().map(|(k, _)| *k).collect();
            let values: Vec<String> = rows.iter().map(|(_, v)| plain(v)).collect();
            format!("{}\n{}\n", header.join(","), values.join(","))
        }
        Format::Text => {
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().map(|(k, v)| format!("{k:<width$}  {}\n", plain(v))).collect()
        }
    }
}

#[derive(Serialize)]
struct GirthReport<'a> {
    group: Family,
    param: u64,
    k: usize,
    seed: u64,
    #[serde(flatten)]
    result: &'a GirthResult,
}

/// Uses the generator stream of experiment trial 0 with the same seed.
fn run_girth(cli: &Cli, group: &GroupArgs, k: usize, max_girth: usize, memory_limit: usize) -> Result<String, CliError> {
    let ctx = GroupContext::new(group.group, group.param).map_err(config_error)?;
    if k == 0 {
        return Err(config_error("need at least one generator"));
    }
    let seed = mix64(cli.seed, 0);
    let result = with_group!(&ctx, g => {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tuple = GeneratorTuple::random(g.clone(), k, &mut rng);
        girth(&tuple, max_girth, memory_limit)
    });
    let result = result.map_err(|e| match e {
        GirthError::MemoryLimit { .. } => CliError::from(ExperimentError::ResourceLimit { failed: vec![(0, e)] }),
        other => config_error(other),
    })?;
    let report = GirthReport { group: group.group, param: group.param, k, seed, result: &result };
    Ok(match cli.format {
        Format::Json => to_json(&report),
        Format::Csv | Format::Text => {
            let girth = result.girth().map(|g| g.to_string()).unwrap_or_else(|| format!(">{max_girth}"));
            let witness = result.witness().map(|w| w.to_string()).unwrap_or_default();
            let rows = [
                ("group", json!(group.group)),
                ("param", json!(group.param)),
                ("k", json!(k)),
                ("seed", json!(seed)),
                ("girth", json!(girth)),
                ("witness", json!(witness)),
                ("stored", json!(result.stored)),
                ("depth", json!(result.depth)),
            ];
            render_rows(cli.format, &rows)
        }
    })
}

fn run_amoeba(
    cli: &Cli,
    word: &str,
    mode: AmoebaMode,
    max_gen: u32,
    runs: usize,
    cap: usize,
) -> Result<String, CliError> {
    let w = parse_word_minimal(word).map_err(config_error)?;
    if runs == 0 {
        return Err(config_error("runs must be at least 1"));
    }
    let outcomes = map_indexed(runs, cli.threads, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(mix64(cli.seed, r as u64));
        match mode {
            AmoebaMode::Population => population_first_free(&w, max_gen, &mut rng, cap),
            AmoebaMode::Greedy => {
                let lineage = greedy_lineage(&w, max_gen, &mut rng);
                Ok(lineage.iter().position(|(_, chi)| *chi <= 0).map(|g| g as u32))
            }
        }
    });
    let mut first_free = vec![0usize; max_gen as usize + 1];
    let (mut never, mut capped) = (0usize, 0usize);
    for o in outcomes {
        match o {
            Ok(Some(g)) => first_free[g as usize] += 1,
            Ok(None) => never += 1,
            Err(_) => capped += 1,
        }
    }
    let mode_name = match mode {
        AmoebaMode::Population => "population",
        AmoebaMode::Greedy => "greedy",
    };
    Ok(match cli.format {
        Format::Json => to_json(&json!({
            "word": w.to_string(),
            "mode": mode_name,
            "runs": runs,
            "max_gen": max_gen,
            "first_free": first_free,
            "never_free": never,
            "population_capped": capped,
        })),
        Format::Csv => {
            let mut out = String::from("generation,count\n");
            for (g, c) in first_free.iter().enumerate() {
                let _ = writeln!(out, "{g},{c}");
            }
            let _ = writeln!(out, "never,{never}\ncapped,{capped}");
            out
        }
        Format::Text => {
            let mut out = format!("{} ({mode_name}), {runs} runs\n", w);
            for (g, c) in first_free.iter().enumerate().filter(|(_, c)| **c > 0) {
                let _ = writeln!(out, "generation {g:>3}: {c}");
            }
            let _ = writeln!(out, "never free: {never}\npopulation capped: {capped}");
            out
        }
    })
}

fn run_bounds(format: Format, kind: BoundChoice, param: u64, len: u64, degree: u64) -> Result<String, CliError> {
    let mut rows = vec![("param", json!(param))];
    match kind {
        BoundChoice::Sn => {
            rows.push(("len", json!(len)));
            rows.push(("bound", json_float(sn_word_prob_bound(param, len)?)));
        }
        BoundChoice::Pgl => {
            rows.push(("len", json!(len)));
            rows.push(("bound", json_float(pgl_word_prob_bound(param, len)?)));
        }
        BoundChoice::SnPower => {
            let exact = exact_power_word_prob_sn(param as usize, len as usize)?;
            let approx = num_traits::ToPrimitive::to_f64(&exact).unwrap_or(f64::NAN);
            rows.push(("len", json!(len)));
            rows.push(("exact", json!(exact.to_string())));
            rows.push(("exact_float", json_float(approx)));
            rows.push(("lower_bound", json_float(sn_power_prob_lower_bound(param, len)?)));
            let upper = sn_word_prob_bound(param, len).ok().map(json_float).unwrap_or(json!(null));
            rows.push(("upper_bound", upper));
        }
        BoundChoice::PglThreshold | BoundChoice::SnThreshold => {
            let kinds: Vec<(&str, BoundKind)> = if kind == BoundChoice::PglThreshold {
                vec![("closed_form", BoundKind::PglClosedForm { p: param }), ("union", BoundKind::PglUnion { p: param })]
            } else {
                vec![("union", BoundKind::Symmetric { n: param })]
            };
            rows.push(("degree", json!(degree)));
            for (name, k) in kinds {
                rows.push((name, json!(union_bound_threshold(degree, k)?)));
            }
        }
    }
    Ok(render_rows(format, &rows))
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&cli)));
    let result = match outcome {
        Ok(r) => r,
        Err(_) => return 4,
    };
    match result {
        Ok(text) => match &cli.out {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    2
                }
            },
            None => {
                print!("{text}");
                0
            }
        },
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn run(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("cayley-girth").chain(args.iter().copied())).unwrap();
        dispatch(&cli)
    }

    #[test]
    fn girth_matches_first_experiment_trial() {
        let one = run(&["girth", "--group", "pgl2", "--p", "101", "--seed", "42"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&one).unwrap();
        let exp = run(&["experiment", "--group", "pgl2", "--p", "101", "--trials", "1", "--seed", "42"]).unwrap();
        let h: serde_json::Value = serde_json::from_str(&exp).unwrap();
        assert_eq!(v["girth"], h["records"][0]["girth"]);
        assert_eq!(v["witness"], h["records"][0]["witness"]);
        assert_eq!(v["kind"], "exact");
        assert_eq!(v["group"], "pgl2");
    }

    #[test]
    fn formats() {
        let text = run(&["experiment", "--group", "pgl2", "--p", "31", "--trials", "10", "--format", "text"]).unwrap();
        assert!(text.contains(">30") && text.contains("n_odd"));
        let csv = run(&["experiment", "--group", "sym", "--n", "6", "--trials", "10", "--format", "csv"]).unwrap();
        assert_eq!(csv.lines().count(), 11);
        let z = run(&["zeros", "--p", "5", "--split", "0,1,2", "--format", "csv"]).unwrap();
        assert!(z.ends_with("16,31,16,true\n"), "{z}");
    }

    #[test]
    fn bounds_and_laws() {
        let b = run(&["bounds", "--kind", "pgl-threshold", "--p", "1009"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&b).unwrap();
        assert_eq!(v["closed_form"], 2);
        let b = run(&["bounds", "--kind", "sn", "--n", "20", "--len", "2"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&b).unwrap();
        assert!((v["bound"].as_f64().unwrap() - 3.2e-4).abs() < 1e-15);
        let l = run(&["law", "--group", "sl2", "--p", "2", "--k", "1"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&l).unwrap();
        assert_eq!(v["length"], 6);
    }

    #[test]
    fn amoeba_distribution_sums_to_runs() {
        let out = run(&["amoeba", "--word", "AbcaaC", "--runs", "50", "--seed", "1"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let total: u64 = v["first_free"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).sum();
        assert_eq!(total + v["never_free"].as_u64().unwrap() + v["population_capped"].as_u64().unwrap(), 50);
        assert_eq!(v["first_free"][0], 0);
    }

    #[test]
    fn error_codes() {
        assert_eq!(run(&["girth", "--group", "pgl2", "--p", "100"]).unwrap_err().code, 2);
        let e = run(&["experiment", "--group", "pgl2", "--p", "1009", "--trials", "2", "--memory-limit", "1000"]);
        assert_eq!(e.unwrap_err().code, 3);
        assert_eq!(run(&["wordprob", "--group", "sym", "--n", "4", "--word", "a1"]).unwrap_err().code, 2);
        assert_eq!(main_with_args(["cayley-girth", "girth", "--bogus"]), 2);
    }

    #[test]
    fn word_parsing_is_shared() {
        assert!(parse_word("AbcaaC", 3).is_ok());
        let w = run(&["wordprob", "--group", "sym", "--n", "2", "--word", "abAB", "--trials", "100"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&w).unwrap();
        assert_eq!(v["hits"], 100);
    }
}
