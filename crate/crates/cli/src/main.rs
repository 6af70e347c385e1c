use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use soergel_core::bsmod::{hom_dim_at_degree, predicted_hom_dim};
use soergel_core::coxeter::{eval, longest, longest_length, reduced_words, Parabolic, Word};
use soergel_core::exprgraph::{build_expanded, build_expanded_from_word, conflate};
use soergel_core::poly_core::dual_bases;
use soergel_core::report::{all_passed, CheckReport};
use soergel_core::suites::{run_suite, SuiteConfig, SUITES};
use soergel_core::thick::z;

const SCHEMA: &str = "soergel-forge/1";
const MAX_RANK: usize = 5;

#[derive(Debug, Parser)]
#[command(name = "soergel-forge", version, about = "Exact Soergel calculus in type A")]
struct Cli {
    /// Rank: the group is S_{n+1}.
    #[arg(long, global = true, default_value_t = 4)]
    n: usize,
    /// Parabolic subset as a comma list, e.g. 1,2,3.
    #[arg(long = "J", global = true, value_delimiter = ',')]
    parabolic: Option<Vec<usize>>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    degree_lo: Option<i32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    degree_hi: Option<i32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Wall-clock budget; exceeding it exits with status 3.
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduced words of the longest element of J, or of the element a word spells.
    Redwords {
        #[arg(long)]
        word: Option<String>,
    },
    /// The reduced-expression graph of the longest element of J, or of a word.
    Graph {
        #[arg(long)]
        word: Option<String>,
        /// Collapse commutation classes.
        #[arg(long)]
        conflated: bool,
    },
    /// The path morphism from the source to the sink of J.
    Zmat,
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
    },
    /// Hom dimensions between two Bott-Samelson bimodules beside the Hecke prediction.
    Homdim {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Dual bases of R over the J-invariants.
    Dualbasis,
}

/// What a command produced, before formatting.
enum Output {
    Json(Value),
    Dot(String),
    Text(String),
    Reports { suite: String, reports: Vec<CheckReport> },
}

#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Budget(u64),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn parse_word(s: &str) -> anyhow::Result<Word> {
    s.parse::<Word>().map_err(|e| anyhow::anyhow!("bad word {s:?}: {e}"))
}

impl Cli {
    fn parabolic(&self) -> anyhow::Result<Parabolic> {
        let idx = self.parabolic.clone().unwrap_or_else(|| (1..=self.n.min(2)).collect());
        if let Some(bad) = idx.iter().find(|&&i| i == 0 || i > self.n) {
            bail!("index {bad} of J lies outside 1..={}", self.n);
        }
        Ok(Parabolic::new(idx))
    }

    fn window(&self, default: (i32, i32)) -> anyhow::Result<(i32, i32)> {
        let w = (self.degree_lo.unwrap_or(default.0), self.degree_hi.unwrap_or(default.1));
        if w.0 > w.1 {
            bail!("empty degree window {}..{}", w.0, w.1);
        }
        Ok(w)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.n == 0 || self.n > MAX_RANK {
            bail!("rank {} outside 1..={MAX_RANK}", self.n);
        }
        let dot_ok = matches!(self.command, Command::Graph { .. });
        if self.format == Format::Dot && !dot_ok {
            bail!("dot output is only available for graph");
        }
        self.parabolic().map(|_| ())
    }

    fn run(&self) -> anyhow::Result<Output> {
        let parabolic = self.parabolic()?;
        match &self.command {
            Command::Redwords { word } => {
                let perm = match word {
                    Some(w) => eval(&parse_word(w)?, self.n)?,
                    None => longest(&parabolic, self.n).0,
                };
                let words: Vec<String> = reduced_words(&perm).iter().map(|w| w.to_string()).collect();
                Ok(match self.format {
                    Format::Text => Output::Text(words.join("\n")),
                    _ => Output::Json(json!({ "count": words.len(), "words": words })),
                })
            }
            Command::Graph { word, conflated } => {
                let g = match word {
                    Some(w) => build_expanded_from_word(&parse_word(w)?)?,
                    None => build_expanded(&longest(&parabolic, parabolic.max_index()).0),
                };
                Ok(match (*conflated, self.format) {
                    (true, Format::Dot) => Output::Dot(conflate(&g).to_dot(&g)),
                    (false, Format::Dot) => Output::Dot(g.to_dot()),
                    (true, _) => Output::Json(conflate(&g).to_json()),
                    (false, _) => Output::Json(g.to_json()),
                })
            }
            Command::Zmat => {
                let m = z(&parabolic)?;
                Ok(match self.format {
                    Format::Text => Output::Text(format!(
                        "z: {} -> {} of degree {}, {} columns",
                        m.source(),
                        m.target(),
                        m.degree(),
                        m.columns().len()
                    )),
                    _ => Output::Json(m.to_json()),
                })
            }
            Command::Verify { suite } => {
                let d = longest_length(&parabolic) as i32;
                let degree_window = match (self.degree_lo, self.degree_hi) {
                    (None, None) => None,
                    _ => Some(self.window((-d, d + 4))?),
                };
                let cfg = SuiteConfig { n: self.n, parabolic, seed: self.seed, degree_window };
                let mut reports = run_suite(suite, &cfg)?;
                reports.sort_by(|a, b| a.check.cmp(&b.check));
                Ok(Output::Reports { suite: suite.clone(), reports })
            }
            Command::Homdim { x, y } => {
                let (x, y) = (parse_word(x)?, parse_word(y)?);
                let span = (x.len() + y.len()) as i32;
                let (lo, hi) = self.window((-span, span))?;
                let mut rows = Vec::new();
                for m in lo..=hi {
                    let dim = hom_dim_at_degree(&x, &y, m, self.n)?;
                    let predicted = predicted_hom_dim(&x, &y, m, self.n)?;
                    rows.push(json!({ "degree": m, "dim": dim, "predicted": predicted }));
                }
                Ok(match self.format {
                    Format::Text => Output::Text(
                        std::iter::once("degree\tdim\tpredicted".to_string())
                            .chain(rows.iter().map(|r| format!("{}\t{}\t{}", r["degree"], r["dim"], r["predicted"])))
                            .collect::<Vec<_>>()
                            .join("\n"),
                    ),
                    _ => Output::Json(json!({ "x": x.to_string(), "y": y.to_string(), "n": self.n, "rows": rows })),
                })
            }
            Command::Dualbasis => {
                let pair = dual_bases(&parabolic)?;
                let basis: Vec<String> = pair.basis.iter().map(|p| p.to_string()).collect();
                let dual: Vec<String> = pair.dual.iter().map(|p| p.to_string()).collect();
                Ok(match self.format {
                    Format::Text => Output::Text(
                        basis.iter().zip(&dual).map(|(g, h)| format!("{g}\t{h}")).collect::<Vec<_>>().join("\n"),
                    ),
                    _ => Output::Json(json!({ "J": parabolic.indices(), "basis": basis, "dual": dual })),
                })
            }
        }
    }
}

/// Run the command on a worker thread so the budget can be enforced.
fn run_with_budget(cli: Cli) -> Result<(Output, Format), Failure> {
    cli.validate()?;
    let format = cli.format;
    let Some(secs) = cli.budget_seconds else {
        return Ok((cli.run()?, format));
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(cli.run());
    });
    match rx.recv_timeout(Duration::from_secs(secs)) {
        Ok(out) => Ok((out?, format)),
        Err(mpsc::RecvTimeoutError::Timeout) => Err(Failure::Budget(secs)),
        Err(mpsc::RecvTimeoutError::Disconnected) => Err(Failure::Usage(anyhow::anyhow!("worker thread panicked"))),
    }
}

fn render(out: Output, format: Format) -> anyhow::Result<(String, bool)> {
    let wrap = |body: Value| -> anyhow::Result<String> {
        let mut v = json!({ "schema": SCHEMA });
        if let (Value::Object(o), Value::Object(b)) = (&mut v, body) {
            o.extend(b);
        }
        serde_json::to_string_pretty(&v).context("serializing output")
    };
    Ok(match out {
        Output::Dot(s) | Output::Text(s) => (s, true),
        Output::Json(v) => {
            let body = if v.is_object() { v } else { json!({ "result": v }) };
            (wrap(body)?, true)
        }
        Output::Reports { suite, reports } => {
            let ok = all_passed(&reports);
            let text = match format {
                Format::Text => reports
                    .iter()
                    .map(|r| format!("{} {} {}", r.status.as_str().to_uppercase(), r.check, r.parameters))
                    .collect::<Vec<_>>()
                    .join("\n"),
                _ => wrap(json!({
                    "suite": suite,
                    "status": if ok { "pass" } else { "fail" },
                    "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                }))?,
            };
            (text, ok)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run_with_budget(cli).and_then(|(out, format)| render(out, format).map_err(Failure::Usage));
    match result {
        Ok((text, ok)) => {
            println!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(secs)) => {
            eprintln!("error: budget of {secs} s exceeded");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_reports_render_as_failure() {
        let reports = vec![
            CheckReport::new("b", json!({}), true),
            CheckReport::new("a", json!({}), false).with_witness(json!({ "why": 1 })),
        ];
        let (text, ok) = render(Output::Reports { suite: "x".into(), reports }, Format::Json).unwrap();
        assert!(!ok);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["status"], "fail");
        assert_eq!(v["reports"][1]["witness"]["why"], 1);
    }

    #[test]
    fn default_parabolic_is_the_first_two_colours() {
        let cli = Cli::parse_from(["soergel-forge", "--n", "3", "redwords"]);
        assert_eq!(cli.parabolic().unwrap(), Parabolic::interval(1, 2));
        let cli = Cli::parse_from(["soergel-forge", "--n", "1", "redwords"]);
        assert_eq!(cli.parabolic().unwrap(), Parabolic::new([1]));
    }
}
