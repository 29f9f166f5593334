mod report;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use attractor_core::attractor::{verify, AttractorSet};
use attractor_core::experiments::{self, OptSource, DEFAULT_MAX_TEXT};
use attractor_core::lazy::{lazy_run, Family, Scope};
use attractor_core::lz::{lz_factorize, VariantFlags};
use attractor_core::solver::{min_attractor_exact, Budget, MAX_SUPPORTED_N};
use attractor_core::text::{complexity_profile, Text};
use attractor_core::words::{WordSpec, SPEC_GRAMMAR};
use clap::{Args, Parser, Subcommand};

use report::{ExperimentReport, Format};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "attractor-lab", version, about = "Online string attractor experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for `rand:<n>:<sigma>` inputs that do not carry one.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Input {
    /// Word spec, `file:<path>`, or `-`/nothing for standard input.
    input: Option<String>,
}

#[derive(Args)]
struct ScopeArgs {
    /// Attractor scope; 0 means unbounded.
    #[arg(long, default_value_t = 0)]
    k: usize,

    /// Only substrings of length exactly k.
    #[arg(long)]
    sharp: bool,
}

impl ScopeArgs {
    fn scope(&self) -> Scope {
        Scope::from_k(self.k)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated word.
    Gen {
        spec: String,
        /// Also report length and substring complexity.
        #[arg(long)]
        stats: bool,
    },
    /// Run Lazy and print its trace.
    Lazy {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scope: ScopeArgs,
    },
    /// Lempel-Ziv factorization.
    Lz {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        self_ref: bool,
        #[arg(long)]
        novel: bool,
    },
    /// Check an attractor; exits 1 with a witness when invalid.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scope: ScopeArgs,
        /// Comma-separated 1-based positions.
        #[arg(long)]
        gamma: String,
    },
    /// Exact minimum attractor.
    Minattr {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scope: ScopeArgs,
        #[arg(long, default_value_t = MAX_SUPPORTED_N)]
        max_n: usize,
        #[arg(long, default_value_t = Budget::default().max_nodes)]
        max_nodes: u64,
    },
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand)]
enum Experiment {
    /// Lazy cost against the optimum on a word family.
    Families {
        /// fib, tm, or sturmian:<q0,q1,...>
        #[arg(long, default_value = "fib")]
        family: String,
        #[arg(long, default_value_t = 3)]
        m_min: i64,
        #[arg(long, default_value_t = 10)]
        m_max: i64,
        #[arg(long, default_value_t = MAX_SUPPORTED_N)]
        max_n: usize,
    },
    /// Spoon-feeding lower bound against the de Bruijn construction.
    Lowerbound {
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// `a..b` or a comma list.
        #[arg(long, default_value = "3..8")]
        sigma: String,
        #[arg(long)]
        sharp: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_TEXT)]
        max_len: u64,
    },
    /// Equidistant markings on both de Bruijn unfoldings.
    Debruijn {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        sigma: usize,
        #[arg(long)]
        prime_check: bool,
    },
    /// Lazy markings next to palindromic prefixes of a Sturmian word.
    Palindromes {
        /// Repeated periodically to the needed length.
        #[arg(long, default_value = "1")]
        directive: String,
        #[arg(long, default_value_t = 8)]
        m: i64,
    },
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::anyhow!(msg.into())
}

fn parse_spec(s: &str, seed: u64) -> Result<WordSpec> {
    let s = if s.starts_with("rand:") && s.matches(':').count() == 2 {
        format!("{s}:{seed}")
    } else {
        s.to_string()
    };
    s.parse::<WordSpec>()
        .map_err(|e| usage(format!("{e}\nword spec grammar: {SPEC_GRAMMAR}")))
}

fn read_input(input: &Input, seed: u64) -> Result<(String, Text)> {
    match input.input.as_deref() {
        None | Some("-") => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf)?;
            while buf.last().is_some_and(|c| *c == b'\n' || *c == b'\r') {
                buf.pop();
            }
            Ok(("stdin".into(), Text::new(buf)))
        }
        Some(s) => match s.strip_prefix("file:") {
            Some(path) => {
                let bytes = std::fs::read(path).with_context(|| format!("reading {path}"))?;
                Ok((s.to_string(), Text::new(bytes)))
            }
            None => {
                let spec = parse_spec(s, seed)?;
                Ok((spec.to_string(), spec.generate()?))
            }
        },
    }
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn opt_str<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

fn ratio(r: f64) -> String {
    format!("{r:.4}")
}

fn parse_sigmas(s: &str) -> Result<Vec<usize>> {
    let bad = || usage(format!("bad sigma range {s:?}; use a..b or a,b,c"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn parse_directive(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| usage(format!("bad directive {s:?}"))))
        .collect()
}

fn parse_family(s: &str) -> Result<Family> {
    match s {
        "fib" => Ok(Family::Fibonacci),
        "tm" => Ok(Family::ThueMorse),
        _ => match s.strip_prefix("sturmian:") {
            Some(q) => Ok(Family::Sturmian(parse_directive(q)?)),
            None => Err(usage(format!("unknown family {s:?}; use fib, tm or sturmian:<q0,q1,...>"))),
        },
    }
}

/// What a command produced: text to print and whether it reports an invalid attractor.
struct Outcome {
    body: String,
    invalid: bool,
}

impl Outcome {
    fn report(r: &ExperimentReport, format: Format) -> Result<Self> {
        Ok(Outcome { body: r.render(format)?, invalid: false })
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Gen { spec, stats } => {
            let spec = parse_spec(spec, cli.seed)?;
            let text = spec.generate()?;
            let mut body = format!("{text}\n");
            if *stats {
                let mut r = ExperimentReport::new("gen", &["l", "distinct"]);
                let p = complexity_profile(&text, text.len().min(64))?;
                r.param("spec", &spec)
                    .param("length", text.len())
                    .param("sigma", text.alphabet().size())
                    .param("delta", format!("{}/{}", p.delta.0, p.delta.1));
                for (i, d) in p.counts.iter().enumerate() {
                    r.push(vec![(i + 1).to_string(), d.to_string()]);
                }
                body.push_str(&r.render(fmt)?);
            }
            Ok(Outcome { body, invalid: false })
        }
        Command::Lazy { input, scope } => {
            let (name, text) = read_input(input, cli.seed)?;
            let trace = lazy_run(&text, scope.scope(), scope.sharp);
            let mut r = ExperimentReport::new("lazy", &["step", "marked", "window_start", "window_end", "novel"]);
            r.param("input", name)
                .param("n", text.len())
                .param("k", trace.scope)
                .param("sharp", trace.sharp)
                .param("cost", trace.cost())
                .param("markings", list(&trace.markings));
            for s in &trace.steps {
                r.push(vec![
                    s.step.to_string(),
                    s.marked.to_string(),
                    s.window_start.to_string(),
                    s.window_end.to_string(),
                    s.novel.to_string(),
                ]);
            }
            Outcome::report(&r, fmt)
        }
        Command::Lz { input, self_ref, novel } => {
            let (name, text) = read_input(input, cli.seed)?;
            let f = lz_factorize(&text, VariantFlags::new(*self_ref, *novel));
            let mut r = ExperimentReport::new("lz", &["index", "start", "length", "source", "content"]);
            r.param("input", name)
                .param("self_referencing", self_ref)
                .param("novel", novel)
                .param("z", f.size())
                .param("phrases", f.phrase_count())
                .param("truncated_tail", f.truncated_tail);
            for p in f.records() {
                r.push(vec![
                    p.index.to_string(),
                    p.start.to_string(),
                    p.length.to_string(),
                    opt_str(p.source),
                    p.content,
                ]);
            }
            Outcome::report(&r, fmt)
        }
        Command::Verify { input, scope, gamma } => {
            let (name, text) = read_input(input, cli.seed)?;
            let positions = AttractorSet::parse_positions(gamma).map_err(|e| usage(e.to_string()))?;
            let set = AttractorSet::new(positions, scope.scope(), scope.sharp)?;
            let v = verify(&text, &set)?;
            let mut r = ExperimentReport::new("verify", &["valid", "witness", "occurrences"]);
            r.param("input", name).param("k", set.scope).param("sharp", set.sharp).param("gamma", &set);
            let (w, occ) = match &v.witness {
                Some(w) => (w.content.clone(), list(&w.occurrences)),
                None => ("-".into(), "-".into()),
            };
            r.push(vec![v.valid.to_string(), w, occ]);
            Ok(Outcome { body: r.render(fmt)?, invalid: !v.valid })
        }
        Command::Minattr { input, scope, max_n, max_nodes } => {
            let (name, text) = read_input(input, cli.seed)?;
            let budget = Budget { max_n: *max_n, max_nodes: *max_nodes };
            let s = min_attractor_exact(&text, scope.scope(), scope.sharp, budget)?;
            let check = verify(&text, &s.witness)?;
            if !check.valid {
                bail!("solver witness failed verification");
            }
            let mut r = ExperimentReport::new("minattr", &["size", "witness", "lower_bound", "nodes", "verified"]);
            r.param("input", name).param("n", text.len()).param("k", s.witness.scope).param("sharp", s.witness.sharp);
            r.push(vec![
                s.size.to_string(),
                s.witness.to_string(),
                s.lower_bound.to_string(),
                s.nodes.to_string(),
                check.valid.to_string(),
            ]);
            Outcome::report(&r, fmt)
        }
        Command::Experiment(e) => Outcome::report(&experiment(e)?, fmt),
    }
}

fn experiment(e: &Experiment) -> Result<ExperimentReport> {
    match e {
        Experiment::Families { family, m_min, m_max, max_n } => {
            let fam = parse_family(family)?;
            let budget = Budget { max_n: *max_n, ..Budget::default() };
            let rows = experiments::families(&fam, *m_min..=*m_max, budget)?;
            let mut r = ExperimentReport::new(
                "families",
                &["instance", "m", "n", "lazy_cost", "opt", "opt_source", "ratio", "half_m"],
            );
            r.param("family", family).param("m", format!("{m_min}..{m_max}")).param("max_n", max_n);
            for row in rows {
                r.push(vec![
                    row.instance,
                    row.m.to_string(),
                    row.n.to_string(),
                    row.lazy_cost.to_string(),
                    row.opt.to_string(),
                    row.opt_source.as_str().into(),
                    ratio(row.ratio),
                    opt_str(row.half_m),
                ]);
            }
            Ok(r)
        }
        Experiment::Lowerbound { k, sigma, sharp, max_len } => {
            let sigmas = parse_sigmas(sigma)?;
            let rows = experiments::lower_bound(*k, &sigmas, *sharp, *max_len)?;
            let mut r = ExperimentReport::new(
                "lowerbound",
                &[
                    "sigma", "n", "t1_len", "lazy_cost", "lazy_cost_in_t2", "lazy_bound", "opt", "opt_source",
                    "ratio",
                ],
            );
            r.param("k", k).param("sharp", sharp).param("sigma", sigma);
            for row in rows {
                if !row.constructive_valid {
                    bail!("constructive attractor for sigma={} failed verification", row.sigma);
                }
                r.push(vec![
                    row.sigma.to_string(),
                    row.n.to_string(),
                    row.t1_len.to_string(),
                    row.lazy_cost.to_string(),
                    row.lazy_cost_in_t2.to_string(),
                    row.lazy_bound.to_string(),
                    row.constructive_cost.to_string(),
                    OptSource::Constructive.as_str().into(),
                    ratio(row.ratio),
                ]);
            }
            Ok(r)
        }
        Experiment::Debruijn { k, sigma, prime_check } => {
            let rows = experiments::de_bruijn_markings(*k, *sigma, *prime_check)?;
            let mut r = ExperimentReport::new(
                "debruijn",
                &["unfolding", "phase", "n", "size", "sharp_valid", "full_valid", "witness"],
            );
            r.param("k", k).param("sigma", sigma).param("prime_check", *prime_check && experiments::is_prime(*k));
            for row in rows {
                r.push(vec![
                    row.unfolding.to_string(),
                    row.phase.to_string(),
                    row.n.to_string(),
                    row.size.to_string(),
                    row.sharp_valid.to_string(),
                    row.full_valid.to_string(),
                    opt_str(row.witness),
                ]);
            }
            Ok(r)
        }
        Experiment::Palindromes { directive, m } => {
            let q = parse_directive(directive)?;
            let probe = experiments::palindrome_probe(&q, *m)?;
            let mut r = ExperimentReport::new("palindromes", &["index", "marking", "palindrome_before", "matched"]);
            r.param("instance", &probe.instance)
                .param("n", probe.n)
                .param("matched", probe.matched)
                .param("match_rate", ratio(probe.match_rate));
            for row in probe.rows {
                r.push(vec![
                    row.index.to_string(),
                    row.marking.to_string(),
                    opt_str(row.palindrome_before),
                    row.palindrome_before.is_some().to_string(),
                ]);
            }
            Ok(r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.body).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().write_all(outcome.body.as_bytes()).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    if outcome.invalid {
        ExitCode::from(EXIT_INVALID)
    } else {
        ExitCode::SUCCESS
    }
}
