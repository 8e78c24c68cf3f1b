use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use maxconv_core::{
    convolution_tree, max_convolve_auto, max_convolve_piecewise, naive_max_convolve, Operator,
    PStar, PiecewiseConfig,
};
use maxconv_tools::bench::{self, DEFAULT_ACCURACY_KS, DEFAULT_ACCURACY_PS, DEFAULT_SPEED_KS};
use maxconv_tools::demo::{self, DemoMode};
use maxconv_tools::io;

#[derive(Parser)]
#[command(name = "maxconv", version, about = "Fast numerical max-convolution and convolution trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Max-convolve two Pmf JSON files.
    Maxconv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[command(flatten)]
        ladder: LadderArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-variable likelihoods from priors (ndjson) and evidence on their sum.
    Tree {
        #[arg(long)]
        priors: PathBuf,
        #[arg(long)]
        sum: PathBuf,
        /// sum | max-naive | max-numeric | pnorm:<p>
        #[arg(long)]
        op: String,
        #[command(flatten)]
        ladder: LadderArgs,
        #[arg(long)]
        out: PathBuf,
    },
    #[command(subcommand)]
    Bench(BenchCommand),
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Naive,
    Numeric,
    Auto,
}

#[derive(Args)]
struct LadderArgs {
    #[arg(long, value_delimiter = ',', default_values_t = PiecewiseConfig::DEFAULT_LADDER)]
    p_ladder: Vec<f64>,
    #[arg(long, default_value_t = PiecewiseConfig::DEFAULT_TAU)]
    tau: f64,
}

impl LadderArgs {
    fn config(&self) -> Result<PiecewiseConfig> {
        Ok(PiecewiseConfig::from_exponents(&self.p_ladder, self.tau)?)
    }
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Wall time of exact vs numeric max-convolution per vector length.
    Speed {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SPEED_KS)]
        k_list: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-index relative error of the numeric estimate for each p*.
    Accuracy {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ACCURACY_KS)]
        k_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ACCURACY_PS)]
        p_list: Vec<f64>,
        #[arg(long, default_value_t = bench::DEFAULT_ACCURACY_REPLICATES)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Probabilistic subset-sum inference with each requested operator.
    SubsetSum {
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = 256)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "naive-max,numeric-max,sum-product")]
        modes: Vec<String>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn parse_operator(text: &str, ladder: &LadderArgs) -> Result<Operator> {
    Ok(match text {
        "sum" => Operator::Sum,
        "max-naive" => Operator::NaiveMax,
        "max-numeric" => Operator::NumericMax(ladder.config()?),
        other => match other.strip_prefix("pnorm:") {
            Some(p) => {
                let p: f64 = p.parse().with_context(|| format!("bad exponent in {other:?}"))?;
                Operator::PNorm(PStar::new(p)?)
            }
            None => bail!("unknown operator {other:?}; expected sum, max-naive, max-numeric or pnorm:<p>"),
        },
    })
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Maxconv {
            left,
            right,
            method,
            ladder,
            out,
        } => {
            let l = io::read_pmf(&left).with_context(|| format!("reading {}", left.display()))?;
            let r = io::read_pmf(&right).with_context(|| format!("reading {}", right.display()))?;
            let result = match method {
                Method::Naive => naive_max_convolve(&l, &r),
                Method::Numeric => max_convolve_piecewise(&l, &r, &ladder.config()?)?,
                Method::Auto => max_convolve_auto(&l, &r, &ladder.config()?)?,
            };
            io::write_pmf(&out, &result)?;
        }
        Command::Tree {
            priors,
            sum,
            op,
            ladder,
            out,
        } => {
            let op = parse_operator(&op, &ladder)?;
            let priors = io::read_ndjson(&priors).with_context(|| format!("reading {}", priors.display()))?;
            let evidence = io::read_pmf(&sum).with_context(|| format!("reading {}", sum.display()))?;
            let result = convolution_tree(&priors, &evidence, &op)?;
            io::write_tree_result(&out, &result)?;
        }
        Command::Bench(BenchCommand::Speed {
            k_list,
            replicates,
            seed,
            out,
        }) => {
            if replicates == 0 {
                bail!("--replicates must be at least 1");
            }
            let records = bench::run_speed_bench(&k_list, replicates, seed)?;
            bench::write_csv(create(&out)?, &records)?;
        }
        Command::Bench(BenchCommand::Accuracy {
            k_list,
            p_list,
            replicates,
            seed,
            out,
        }) => {
            if replicates == 0 {
                bail!("--replicates must be at least 1");
            }
            let ps = p_list.into_iter().map(PStar::new).collect::<Result<Vec<_>, _>>()?;
            let rows = bench::run_accuracy_sweep(&k_list, &ps, replicates, seed)?;
            bench::write_csv(create(&out)?, &rows)?;
        }
        Command::Demo(DemoCommand::SubsetSum {
            n,
            k,
            seed,
            modes,
            out_dir,
        }) => {
            let modes = modes.iter().map(|m| m.parse::<DemoMode>()).collect::<Result<Vec<_>, _>>()?;
            let (instance, report) = demo::run_subset_sum_demo(n, k, seed, &modes)?;
            demo::write_demo_outputs(&out_dir, &instance, &report)?;
            for m in &report.modes {
                println!(
                    "{:<12} {:>10.4}s  within {} bins of true: {:.1}%",
                    m.mode.name(),
                    m.wall_seconds,
                    demo::RECOVERY_RADIUS,
                    100.0 * m.recovered_fraction
                );
            }
            if let Some(a) = report.numeric_naive_agreement {
                println!("numeric/naive argmax agreement: {:.1}%", 100.0 * a);
            }
            if let Some(r) = report.speed_ratio() {
                println!("numeric/naive wall time: {r:.4}");
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run(Cli::parse())
}

#[cfg(test)]
mod tests {
    use std::fs;
    use std::path::Path;

    use serde_json::Value;

    use super::*;

    fn invoke(args: &[&str]) -> Result<()> {
        let cli = Cli::try_parse_from(std::iter::once("maxconv").chain(args.iter().copied()))?;
        run(cli)
    }

    fn json(path: &Path) -> Value {
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
    }

    fn s(p: &Path) -> &str {
        p.to_str().unwrap()
    }

    #[test]
    fn maxconv_methods_agree_on_small_input() {
        let dir = tempfile::tempdir().unwrap();
        let (l, r) = (dir.path().join("l.json"), dir.path().join("r.json"));
        fs::write(&l, r#"{"offset": 0, "values": [0.5, 1.0]}"#).unwrap();
        fs::write(&r, r#"{"offset": 2, "values": [1.0, 0.25]}"#).unwrap();
        for method in ["naive", "auto"] {
            let out = dir.path().join(format!("{method}.json"));
            invoke(&["maxconv", "--left", s(&l), "--right", s(&r), "--method", method, "--out", s(&out)]).unwrap();
            let v = json(&out);
            assert_eq!(v["offset"], 2);
            assert_eq!(v["values"], serde_json::json!([0.5, 1.0, 0.25]));
        }
        let out = dir.path().join("numeric.json");
        invoke(&[
            "maxconv", "--left", s(&l), "--right", s(&r), "--method", "numeric", "--p-ladder", "8,32", "--tau", "0.5",
            "--out", s(&out),
        ])
        .unwrap();
        let values: Vec<f64> = serde_json::from_value(json(&out)["values"].clone()).unwrap();
        assert!((values[1] - 1.0).abs() < 0.03);
    }

    #[test]
    fn maxconv_rejects_bad_input() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.json");
        fs::write(&bad, r#"{"offset": 0, "values": [-1.0]}"#).unwrap();
        let out = dir.path().join("out.json");
        assert!(invoke(&["maxconv", "--left", s(&bad), "--right", s(&bad), "--method", "naive", "--out", s(&out)]).is_err());
        let missing = dir.path().join("missing.json");
        assert!(invoke(&["maxconv", "--left", s(&missing), "--right", s(&bad), "--method", "naive", "--out", s(&out)]).is_err());
        assert!(invoke(&["maxconv", "--left", s(&bad), "--right", s(&bad), "--method", "fast", "--out", s(&out)]).is_err());
        assert!(!out.exists());
    }

    #[test]
    fn tree_two_variable_example() {
        let dir = tempfile::tempdir().unwrap();
        let (priors, sum, out) = (dir.path().join("p.ndjson"), dir.path().join("s.json"), dir.path().join("t.json"));
        fs::write(&priors, "{\"offset\":0,\"values\":[0.5,0.5]}\n\n{\"offset\":0,\"values\":[0.9,0.1]}\n").unwrap();
        fs::write(&sum, r#"{"offset": 1, "values": [1.0]}"#).unwrap();
        invoke(&["tree", "--priors", s(&priors), "--sum", s(&sum), "--op", "sum", "--out", s(&out)]).unwrap();
        let first: Vec<f64> = serde_json::from_value(json(&out)["likelihoods"][0]["values"].clone()).unwrap();
        assert!((first[0] - 0.1).abs() < 1e-12 && (first[1] - 0.9).abs() < 1e-12);

        for op in ["max-naive", "max-numeric", "pnorm:16"] {
            invoke(&["tree", "--priors", s(&priors), "--sum", s(&sum), "--op", op, "--out", s(&out)]).unwrap();
            assert_eq!(json(&out)["likelihoods"].as_array().unwrap().len(), 2);
        }
        for op in ["min", "pnorm:0.5", "pnorm:x"] {
            assert!(invoke(&["tree", "--priors", s(&priors), "--sum", s(&sum), "--op", op, "--out", s(&out)]).is_err());
        }
    }

    #[test]
    fn tree_reports_inconsistent_evidence() {
        let dir = tempfile::tempdir().unwrap();
        let (priors, sum, out) = (dir.path().join("p.ndjson"), dir.path().join("s.json"), dir.path().join("t.json"));
        fs::write(&priors, "{\"offset\":0,\"values\":[1.0,1.0]}\n{\"offset\":0,\"values\":[1.0,1.0]}\n").unwrap();
        fs::write(&sum, r#"{"offset": 10, "values": [1.0]}"#).unwrap();
        let err = invoke(&["tree", "--priors", s(&priors), "--sum", s(&sum), "--op", "sum", "--out", s(&out)]).unwrap_err();
        assert!(format!("{err:#}").contains("inconsistent"));
    }

    #[test]
    fn bench_outputs_are_deterministic_csv() {
        let dir = tempfile::tempdir().unwrap();
        let speed = dir.path().join("speed.csv");
        invoke(&["bench", "speed", "--k-list", "16,32", "--replicates", "2", "--out", s(&speed)]).unwrap();
        let text = fs::read_to_string(&speed).unwrap();
        assert_eq!(text.lines().next(), Some("k,method,replicate,wall_seconds"));
        assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);

        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        for out in [&a, &b] {
            invoke(&["bench", "accuracy", "--k-list", "16", "--p-list", "4,64", "--replicates", "3", "--seed", "5", "--out", s(out)])
                .unwrap();
        }
        let text = fs::read_to_string(&a).unwrap();
        assert_eq!(text, fs::read_to_string(&b).unwrap());
        assert_eq!(text.lines().next(), Some("k,p,index,exact_value,rel_abs_error"));
        assert_eq!(text.lines().count(), 1 + 31 * 2 * 3);
        assert!(invoke(&["bench", "speed", "--replicates", "0", "--out", s(&speed)]).is_err());
    }

    #[test]
    fn demo_writes_report_and_curves() {
        let dir = tempfile::tempdir().unwrap();
        let out_dir = dir.path().join("demo");
        invoke(&["demo", "subset-sum", "--n", "4", "--k", "16", "--seed", "2", "--out-dir", s(&out_dir)]).unwrap();
        let report = json(&out_dir.join("report.json"));
        assert_eq!(report["modes"].as_array().unwrap().len(), 3);
        assert!(report["numeric_naive_agreement"].is_number());
        assert_eq!(json(&out_dir.join("instance.json"))["priors"].as_array().unwrap().len(), 4);
        for mode in ["naive-max", "numeric-max", "sum-product"] {
            let curves = fs::read_to_string(out_dir.join(format!("likelihoods-{mode}.ndjson"))).unwrap();
            assert_eq!(curves.lines().count(), 4);
        }
        assert!(invoke(&["demo", "subset-sum", "--modes", "fast", "--out-dir", s(&out_dir)]).is_err());
    }
}
