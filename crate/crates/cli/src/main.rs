use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use uniram_core::borelcodes::{complement, format_bits, member, omega_eval, parse_bits, FuncCode, LabeledTree};
use uniram_core::fronts::{classify_set, hom_holds, Verdict};
use uniram_core::ideals::{
    by_name, diagonalize, uniform_p, uniform_q, ExtRational, Submeasure, REGISTERED,
};
use uniram_core::literals;
use uniram_core::selectors::{galvin_search, nw_select, ramsey_select, GalvinOutcome, GALVIN_SEARCH_BUDGET};
use uniram_core::streams::{take, FinSet, NatStream};
use uniram_core::workbench::{run_gallery, Certificate, GALLERY};
use uniram_core::{Error, Result};

#[derive(Parser)]
#[command(name = "uniram", version, about = "Finite-horizon uniform Ramsey selectors")]
struct Cli {
    /// Print a single JSON object instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homogeneous set for a coloring of [N]^n.
    Ramsey {
        #[arg(long)]
        n: usize,
        /// Family literal, file, or name (even-sum, cy, sierpinski, all, none).
        #[arg(long)]
        coloring: String,
        #[arg(long, default_value = "naturals")]
        stream: String,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        trace: bool,
    },
    /// Nash-Williams selector for a front and a family.
    Nw {
        #[arg(long)]
        front: String,
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "naturals")]
        stream: String,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        trace: bool,
    },
    /// Diagonal of a decreasing sequence.
    Diagonalize {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        count: usize,
    },
    /// Uniform p+ extractor over a decreasing sequence.
    UniformP {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        levels: u64,
        #[arg(long)]
        horizon: u64,
    },
    /// Uniform q+ extractor over a partition into finite pieces.
    UniformQ {
        #[arg(long)]
        phi: String,
        #[arg(long, default_value = "naturals")]
        stream: String,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        levels: u64,
        #[arg(long)]
        horizon: u64,
    },
    /// Borel codes on labeled trees.
    Borel(BorelArgs),
    /// Exhaustive search for a set avoiding a family.
    GalvinSearch {
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        horizon: u64,
        #[arg(long, default_value = "naturals")]
        stream: String,
        #[arg(long, default_value_t = GALVIN_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Run a gallery instance.
    Gallery {
        /// One of cy, woq, converge, nwd.
        instance: String,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        trace: bool,
    },
    /// Classify a finite set against a front and a family.
    CheckHom {
        #[arg(long)]
        front: String,
        #[arg(long)]
        family: String,
        /// Comma-separated elements.
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
}

#[derive(Args)]
struct BorelArgs {
    #[command(subcommand)]
    command: BorelCommand,
}

#[derive(Subcommand)]
enum BorelCommand {
    /// Membership of a point in a coded set.
    Eval {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        x: String,
    },
    /// The code of the complement.
    Complement {
        #[arg(long)]
        tree: String,
    },
    /// The first m bits of the coded function at a point.
    Omega {
        #[arg(long)]
        func: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        m: usize,
    },
}

/// What every command reports.
struct Report {
    output: Value,
    verdict: Option<String>,
    trace: Vec<String>,
    certificates: Vec<Certificate>,
    /// A negative outcome: `Neither` or no witness.
    negative: bool,
}

impl Report {
    fn new(output: Value) -> Self {
        Report { output, verdict: None, trace: Vec::new(), certificates: Vec::new(), negative: false }
    }

    fn verdict(mut self, v: impl Into<String>) -> Self {
        self.verdict = Some(v.into());
        self
    }

    fn cert(mut self, name: &str, holds: bool, detail: impl Into<String>) -> Self {
        self.certificates.push(Certificate::new(name, holds, detail));
        self
    }

    fn to_json(&self) -> Value {
        json!({
            "output": self.output,
            "verdict": self.verdict,
            "trace": self.trace,
            "certificates": self.certificates.iter().map(|c| json!({
                "name": c.name,
                "holds": c.holds,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }

    fn print_text(&self) {
        let out = match &self.output {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        println!("output: {out}");
        if let Some(v) = &self.verdict {
            println!("verdict: {v}");
        }
        for line in &self.trace {
            println!("{line}");
        }
        for c in &self.certificates {
            let mark = if c.holds { "ok" } else { "FAILED" };
            println!("certificate {}: {mark} ({})", c.name, c.detail);
        }
    }
}

fn set_json(s: &FinSet) -> Value {
    json!(s.as_slice())
}

fn load_stream(arg: &str) -> Result<NatStream> {
    literals::stream(&literals::load(arg)?)
}

fn load_phi(name: &str) -> Result<std::sync::Arc<dyn Submeasure>> {
    by_name(name).ok_or_else(|| {
        Error::InvalidInput(format!("unknown submeasure {name:?}; expected one of {}", REGISTERED.join(", ")))
    })
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn load_tree(arg: &str) -> Result<LabeledTree> {
    let text = if arg.trim_start().starts_with('[') { arg.to_string() } else { read_file(arg)? };
    LabeledTree::parse(&text)
}

fn selector_report(r: uniram_core::selectors::SelectorReport, trace: bool) -> Report {
    let mut rep = Report::new(set_json(&r.output)).verdict(r.verdict.as_str());
    if trace {
        rep.trace = r.trace.iter().map(ToString::to_string).collect();
    }
    rep
}

fn run(command: Command) -> Result<Report> {
    Ok(match command {
        Command::Ramsey { n, coloring, stream, horizon, trace } => {
            let fam = literals::family(&literals::load(&coloring)?)?;
            let x = load_stream(&stream)?;
            let pred = fam.predicate.clone();
            let r = ramsey_select(n, move |s: &FinSet| pred(s), &x, horizon)?;
            let out = r.output.as_slice().to_vec();
            // every n-subset gets the reported color
            let want = r.verdict == Verdict::Hom1;
            let mono = r.output.subsets().filter(|s| s.len() == n).all(|s| (fam.predicate)(&s) == want);
            let size = out.len();
            selector_report(r, trace).cert("monochromatic", mono, format!("{size} elements"))
        }
        Command::Nw { front, family, stream, horizon, trace } => {
            let b = literals::front(&literals::load(&front)?, horizon)?;
            let fam = literals::family(&literals::load(&family)?)?;
            let c = literals::color_family(b, &fam);
            let x = load_stream(&stream)?;
            let r = nw_select(&c, &x, horizon)?;
            let holds = hom_holds(&c, &r.output, r.verdict);
            let inside = r.output.is_subset(&take(&x, horizon));
            selector_report(r, trace)
                .cert("homogeneous", holds, "checked against the front")
                .cert("inside-prefix", inside, format!("within take(x, {horizon})"))
        }
        Command::Diagonalize { seq, count } => {
            let xs = literals::decreasing_seq(&literals::load(&seq)?)?;
            let d = diagonalize(&xs, count);
            let h = d.max().map_or(0, |m| m + 1);
            let selective = d.iter().all(|n| d.above(n).is_subset(&take(&xs.at(n), h)));
            Report::new(set_json(&d)).cert("selective", selective, "later elements lie in x_n")
        }
        Command::UniformP { phi, seq, levels, horizon } => {
            let phi = load_phi(&phi)?;
            let xs = literals::decreasing_seq(&literals::load(&seq)?)?;
            let y = uniform_p(&*phi, &xs, levels, horizon)?;
            let value = phi.eval(&y);
            let target = ExtRational::from_u64(levels - 1);
            let holds = value >= target;
            Report::new(set_json(&y)).cert("phi", holds, format!("{}(output) = {value}, needs {target}", phi.name()))
        }
        Command::UniformQ { phi, stream, partition, levels, horizon } => {
            let phi = load_phi(&phi)?;
            let x = load_stream(&stream)?;
            let parts = literals::partition(&literals::load(&partition)?)?;
            let y = uniform_q(&*phi, &x, &parts, levels, horizon)?;
            let value = phi.eval(&y);
            let target = ExtRational::from_u64(levels);
            let holds = value >= target;
            Report::new(set_json(&y))
                .cert("selector", parts.is_partial_selector(&y), "meets each piece at most once")
                .cert("phi", holds, format!("{}(output) = {value}, needs {target}", phi.name()))
        }
        Command::Borel(BorelArgs { command }) => match command {
            BorelCommand::Eval { tree, x } => {
                let t = load_tree(&tree)?;
                let x = parse_bits(&x)?;
                let m = member(&x, &t)?;
                Report::new(json!(m)).cert("valid", t.validate(), format!("{} nodes", t.size()))
            }
            BorelCommand::Complement { tree } => {
                let t = load_tree(&tree)?;
                if !t.validate() {
                    return Err(Error::InvalidTree(format!("{t} breaks the complement-node condition")));
                }
                let g = complement(&t);
                Report::new(g.to_json()).cert("valid", g.validate(), format!("{} nodes", g.size()))
            }
            BorelCommand::Omega { func, x, m } => {
                let text = if func.trim_start().starts_with(['{', '[']) { func } else { read_file(&func)? };
                let f = FuncCode::parse(&text)?;
                if !f.validate() {
                    return Err(Error::InvalidTree("a coordinate breaks the complement-node condition".into()));
                }
                let bits = omega_eval(&parse_bits(&x)?, &f, m)?;
                Report::new(json!(format_bits(&bits)))
            }
        },
        Command::GalvinSearch { family, k, horizon, stream, budget } => {
            let fam = literals::family(&literals::load(&family)?)?;
            let x = load_stream(&stream)?;
            let pred = fam.predicate.clone();
            let f = move |s: &FinSet| !s.is_empty() && pred(s);
            match galvin_search(&f, &x, horizon, k, budget)? {
                GalvinOutcome::Witness(w) => Report::new(set_json(&w))
                    .verdict("witness")
                    .cert("second-alternative", true, "no nonempty subset is in the family"),
                GalvinOutcome::NoWitness => {
                    let mut rep = Report::new(Value::Null).verdict("no-witness");
                    rep.negative = true;
                    rep.cert("exhaustive", true, format!("all {k}-subsets below horizon {horizon} meet the family"))
                }
            }
        }
        Command::Gallery { instance, horizon, trace } => {
            if !GALLERY.contains(&instance.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "unknown gallery instance {instance:?}; expected one of {}",
                    GALLERY.join(", ")
                )));
            }
            let g = run_gallery(&instance, horizon)?;
            let mut rep = selector_report(g.report, trace);
            rep.certificates = g.certificates;
            rep
        }
        Command::CheckHom { front, family, set } => {
            let s = literals::csv_set(&set)?;
            let horizon = s.max().map_or(1, |m| m + 1);
            let b = literals::front(&literals::load(&front)?, horizon.max(2))?;
            let fam = literals::family(&literals::load(&family)?)?;
            let c = literals::color_family(b, &fam);
            let v = classify_set(&c, &s);
            let mut rep = Report::new(set_json(&s))
                .verdict(v.as_str())
                .cert("hom0", hom_holds(&c, &s, Verdict::Hom0), "no subset in the family")
                .cert("hom1", hom_holds(&c, &s, Verdict::Hom1), "every front member has a prefix in the family");
            rep.negative = v == Verdict::Neither;
            rep
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(rep) => {
            if cli.json {
                println!("{}", rep.to_json());
            } else {
                rep.print_text();
            }
            if rep.negative {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"output": null, "verdict": "error", "trace": [], "certificates": [], "error": e.to_string()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
