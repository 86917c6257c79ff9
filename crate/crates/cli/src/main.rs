use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gentree::arrangement::IsoAnswer;
use gentree::quasitree::{order_from_betweenness, Axiom, Betweenness, Median, Mode, QuasiTree};
use gentree::rankwidth::{discrete_rankwidth, Graph, Mask};
use gentree::scheme::{iso, parse_run, scheme_of_term, Kind, Scheme, Verdict};
use gentree::sjt_ojt::eval_sj;
use gentree::sjt_ojt::oj::{val_soj_finite, Ordered};
use gentree::structured::Structured;
use gentree::term::parse_equations;
use gentree::value::val_truncated;

/// Exit codes.
const OK: u8 = 0;
const VIOLATED: u8 = 1;
const UNKNOWN: u8 = 2;
const INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "gentree", version, about = "Regular join-trees, description schemes, quasi-trees and rank-width")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algebra {
    Sbj,
    Sj,
    Soj,
}

#[derive(Clone, Copy, ValueEnum)]
enum DotKind {
    /// Structured tree file.
    Tree,
    /// Ordered tree file.
    Ordered,
    /// Betweenness file of a quasi-tree.
    Qt,
    /// Graph file; draws an optimal layout.
    Layout,
}

#[derive(Subcommand)]
enum Cmd {
    /// Value of an equation system's term truncated at a depth.
    Eval {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value = "sbj")]
        algebra: Algebra,
    },
    /// The finite term obtained by cutting at a depth.
    Truncate {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Binary description scheme of a term's value.
    Scheme {
        file: PathBuf,
        #[arg(long)]
        minimal: bool,
    },
    /// Finite part of a scheme's unfolding.
    Unfold {
        scheme: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        width: usize,
    },
    /// Whether a scheme describes a finite tree under a run.
    Describe {
        scheme: PathBuf,
        tree: PathBuf,
        /// Lines `node state` and `dir node direction`; missing entries are matched by name.
        #[arg(long)]
        run: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        bound: usize,
    },
    /// Canonical minimal scheme.
    Minimize { scheme: PathBuf },
    /// Isomorphism of the trees two schemes describe.
    Iso { a: PathBuf, b: PathBuf },
    /// Betweenness axioms A1-A7 and A7'.
    Axioms {
        file: PathBuf,
        /// Check every quadruple (the default unless --sample is given).
        #[arg(long)]
        exhaustive: bool,
        /// Check this many random quadruples instead.
        #[arg(long, conflicts_with = "exhaustive")]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Linear order with the given anchors whose betweenness is the input.
    Order {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        anchors: Vec<String>,
    },
    /// Join-tree obtained by rooting a quasi-tree.
    Root { file: PathBuf, r: String },
    /// Median of three nodes of a quasi-tree.
    Median { file: PathBuf, x: String, y: String, z: String },
    /// Discrete rank-width with an optimal layout.
    Rankwidth {
        file: PathBuf,
        #[arg(long, default_value_t = gentree::rankwidth::MAX_EXHAUSTIVE)]
        max: usize,
    },
    /// Cut-rank between two vertex sets.
    Cutrank {
        file: PathBuf,
        #[arg(long = "U", num_args = 0.., value_delimiter = ',')]
        u: Vec<String>,
        #[arg(long = "W", num_args = 0.., value_delimiter = ',')]
        w: Vec<String>,
    },
    /// Graphviz output.
    Dot {
        #[arg(value_enum)]
        kind: DotKind,
        file: PathBuf,
    },
}

fn read(p: &PathBuf) -> Result<String> {
    std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
}

fn scheme(p: &PathBuf) -> Result<Scheme> {
    Scheme::parse(&read(p)?).with_context(|| format!("in {}", p.display()))
}

fn betweenness(p: &PathBuf) -> Result<Betweenness> {
    Betweenness::parse(&read(p)?).with_context(|| format!("in {}", p.display()))
}

fn graph(p: &PathBuf) -> Result<Graph> {
    Graph::parse(&read(p)?).with_context(|| format!("in {}", p.display()))
}

fn mask(g: &Graph, names: &[String]) -> Result<Mask> {
    names.iter().try_fold(0, |m, n| match g.id(n) {
        Some(v) => Ok(m | 1 << v),
        None => bail!("unknown vertex `{n}`"),
    })
}

fn verdict(v: Verdict) -> (String, u8) {
    match v {
        Verdict::Holds => ("holds\n".into(), OK),
        Verdict::HoldsUpTo(b) => (format!("unknown({b})\n"), UNKNOWN),
        Verdict::Violated(v) => (format!("violated: {v}\n"), VIOLATED),
    }
}

fn run(cmd: Cmd) -> Result<(String, u8)> {
    Ok(match cmd {
        Cmd::Eval { file, depth, algebra } => {
            let aut = parse_equations(&read(&file)?)?;
            let text = match algebra {
                Algebra::Sbj => val_truncated(&aut, depth)?.to_text(),
                Algebra::Sj => eval_sj(&aut.truncate(depth))?.to_text(),
                Algebra::Soj => val_soj_finite(&aut.truncate(depth))?.to_text(),
            };
            (text, OK)
        }
        Cmd::Truncate { file, depth } => (format!("{}\n", parse_equations(&read(&file)?)?.truncate(depth)), OK),
        Cmd::Scheme { file, minimal } => {
            let (s, _) = scheme_of_term(&parse_equations(&read(&file)?)?)?;
            if !minimal {
                (s.to_text(), OK)
            } else {
                match s.minimize() {
                    Ok(m) => (m.to_text(), OK),
                    Err(e) => (format!("{}# not minimized: {e}\n", s.to_text()), UNKNOWN),
                }
            }
        }
        Cmd::Unfold { scheme: p, depth, width } => {
            let s = scheme(&p)?;
            let u = s.unfold(depth, width)?;
            let mut out = match &u.ordered {
                Some(o) => o.to_text(),
                None => u.tree.to_text(),
            };
            for (x, q) in u.run.r.iter().enumerate() {
                out.push_str(&format!("# {} : {}\n", u.tree.name(x), s.states()[*q]));
            }
            (out, OK)
        }
        Cmd::Describe { scheme: p, tree, run: r, bound } => {
            let s = scheme(&p)?;
            let text = read(&tree)?;
            let run_text = match &r {
                Some(r) => read(r)?,
                None => String::new(),
            };
            let v = if s.kind() == Kind::Soj {
                let o = Ordered::parse(&text)?;
                let run = parse_run(&s, o.structured(), &run_text)?;
                s.describes_ordered(&o, &run, bound)?
            } else {
                let j = Structured::parse(&text)?;
                let run = parse_run(&s, &j, &run_text)?;
                s.describes(&j, &run, bound)?
            };
            verdict(v)
        }
        Cmd::Minimize { scheme: p } => match scheme(&p)?.minimize() {
            Ok(m) => (m.to_text(), OK),
            Err(e @ gentree::scheme::SchemeError::Unsupported(_)) => (format!("unknown(0): {e}\n"), UNKNOWN),
            Err(e) => return Err(e.into()),
        },
        Cmd::Iso { a, b } => {
            let (sa, sb) = (scheme(&a)?, scheme(&b)?);
            let cert = |s: &Scheme| s.minimize().map(|m| m.to_text()).unwrap_or_else(|e| format!("# {e}\n"));
            match iso(&sa, &sb) {
                IsoAnswer::Iso => (format!("iso\n# common minimal scheme\n{}", cert(&sa)), OK),
                IsoAnswer::NotIso => {
                    (format!("not_iso\n# minimal scheme of {}\n{}# minimal scheme of {}\n{}", a.display(), cert(&sa), b.display(), cert(&sb)), VIOLATED)
                }
                IsoAnswer::Unknown(k) => (format!("unknown({k})\n"), UNKNOWN),
            }
        }
        Cmd::Axioms { file, exhaustive: _, sample, seed } => {
            let b = betweenness(&file)?;
            let mode = match sample {
                Some(quads) => Mode::Sampled { quads, seed },
                None => Mode::Exhaustive,
            };
            let report = b.check_axioms(mode);
            let mut out = format!("# {} quadruples\n", report.quadruples);
            for a in Axiom::ALL {
                match report.failure(a) {
                    None => out.push_str(&format!("{a} pass\n")),
                    Some(q) => {
                        let k = if matches!(a, Axiom::A4 | Axiom::A5 | Axiom::A6) { 4 } else { 3 };
                        let names: Vec<&str> = q[..k].iter().map(|&x| b.name(x)).collect();
                        out.push_str(&format!("{a} FAIL ({})\n", names.join(", ")));
                    }
                }
            }
            let code = if report.is_quasi_tree() && b.len() >= 3 {
                OK
            } else {
                VIOLATED
            };
            (out, code)
        }
        Cmd::Order { file, anchors } => {
            let b = betweenness(&file)?;
            let l = order_from_betweenness(&b, b.id(&anchors[0])?, b.id(&anchors[1])?)?;
            let names: Vec<&str> = l.iter().map(|&x| b.name(x)).collect();
            (format!("{}\n", names.join(" < ")), OK)
        }
        Cmd::Root { file, r } => {
            let q = QuasiTree::new(betweenness(&file)?)?;
            let r = q.betweenness().id(&r)?;
            (q.root_order(r).to_text(), OK)
        }
        Cmd::Median { file, x, y, z } => {
            let q = QuasiTree::new(betweenness(&file)?)?;
            let b = q.betweenness();
            match q.median(b.id(&x)?, b.id(&y)?, b.id(&z)?)? {
                Median::Node(w) => (format!("{}\n", b.name(w)), OK),
                Median::OnALine => ("on_a_line\n".into(), OK),
            }
        }
        Cmd::Rankwidth { file, max } => {
            let g = graph(&file)?;
            let (r, t) = discrete_rankwidth(&g, max)?;
            (format!("{r}\n{}", t.to_dot(&g)), OK)
        }
        Cmd::Cutrank { file, u, w } => {
            let g = graph(&file)?;
            (format!("{}\n", g.cut_rank(mask(&g, &u)?, mask(&g, &w)?)?), OK)
        }
        Cmd::Dot { kind, file } => {
            let text = read(&file)?;
            let out = match kind {
                DotKind::Tree => Structured::parse(&text)?.to_dot(),
                DotKind::Ordered => Ordered::parse(&text)?.structured().to_dot(),
                DotKind::Qt => QuasiTree::new(Betweenness::parse(&text)?)?.to_dot(),
                DotKind::Layout => {
                    let g = Graph::parse(&text)?;
                    discrete_rankwidth(&g, gentree::rankwidth::MAX_EXHAUSTIVE)?.1.to_dot(&g)
                }
            };
            (out, OK)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { OK });
        }
    };
    match run(cli.cmd) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT)
        }
    }
}
