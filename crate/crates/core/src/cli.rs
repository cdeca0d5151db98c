//! The `stci` command line: every computation behind a subcommand, with
//! human, JSON and CSV renderings.
//!
//! [`run`] does no I/O of its own; it returns the exit code and the text for
//! stdout and stderr so it can be driven from tests.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::arith::Rational;
use crate::chow::{st_expansion, BlowupContext};
use crate::degree::{enumerate_pairs, format_pair_list, EnumerateOptions};
use crate::error::{Error, Result};
use crate::rdp::{phi, Configuration, RdpPair, TypeSequence};
use crate::ruling::{parse_history, snort_check, strict_transform_class, LabeledGraph};
use crate::theorems::{
    bungo_lhs, bungobungo_solve, config_search, kformula_bound, miyaoka_bound, resolution_bound,
    thm1_value, thm2_margins, thm3_check, thma_verdict, ConfigConstraints, StciParams,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "stci",
    version,
    about = "Exact invariants of rational double point pairs and set-theoretic complete intersections"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Degrees {
    #[arg(long)]
    s: u64,
    #[arg(long)]
    t: u64,
    #[arg(long)]
    d: u64,
    #[arg(long, default_value_t = 0)]
    g: u64,
}

impl Degrees {
    fn params(&self) -> Result<StciParams> {
        StciParams::new(self.s, self.t, self.d, self.g)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariants of a single pair or a configuration.
    #[command(subcommand)]
    Rdp(RdpCommand),
    /// The type sequence phi(n, k) of A(n, k).
    Phi { n: u64, k: u64 },
    /// Products in the Chow ring of the iterated blowup.
    #[command(subcommand)]
    Chow(ChowCommand),
    /// The common value of p_1..p_{n-1} for disjoint singular loci.
    Thm1(Degrees),
    /// The inequalities on the type of (S, C), k = 1..n-1.
    Thm2 {
        #[command(flatten)]
        deg: Degrees,
        /// Type prefix, e.g. 9,8,2.
        #[arg(long)]
        p: TypeSequence,
    },
    /// The weighted type sum against d^2/s + d(s-4) + 2 - 2g.
    Thm3 {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        g: u64,
        /// Type sequence, e.g. (9,9) or 2,1^[4].
        #[arg(
            long = "type",
            conflicts_with = "config",
            required_unless_present = "config"
        )]
        ty: Option<TypeSequence>,
        /// Configuration, e.g. "9*A:2:1"; its type is used.
        #[arg(long)]
        config: Option<Configuration>,
        /// Sum only the first N entries.
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Upper bounds on the total type of a surface of degree s.
    Bound { s: u64 },
    /// The bound p_1 <= d(s-1) - (3d + 2g - 2 - l).
    Kbound {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        g: u64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
    },
    /// All (n, p) passing the four bungobungo constraints.
    Bungo,
    /// Configurations with a given type.
    SearchConfig {
        #[arg(long = "type")]
        ty: TypeSequence,
        #[arg(long, allow_hyphen_values = true)]
        max_def: Option<i64>,
        #[arg(long)]
        max_sigma: Option<u64>,
        /// Keep only configurations with this delta.
        #[arg(long)]
        delta: Option<Rational>,
        /// Keep only configurations whose Miyaoka sum is at most this.
        #[arg(long)]
        miyaoka_budget: Option<Rational>,
        /// Require this pair to occur (repeatable).
        #[arg(long = "contains")]
        contains: Vec<RdpPair>,
    },
    /// Degree pairs (s, t) allowed for a curve of degree d and genus g.
    Enumerate {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        g: u64,
        /// Check only the orientation with s in the bracket.
        #[arg(long)]
        one_sided: bool,
        #[arg(long)]
        s_max: Option<u64>,
        #[arg(long)]
        t_max: Option<u64>,
    },
    /// Whether d <= g + 3 follows for the given degrees.
    Thma(Degrees),
    /// A standard labeled graph built from a history.
    Graph {
        /// Base vertex.
        #[arg(long, default_value_t = 1)]
        base: u64,
        /// Operations, e.g. "+,1,+".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        history: String,
    },
    /// The cone inequalities for a class sum a_k R_k.
    Snort {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        a: Vec<BigInt>,
    },
}

#[derive(Debug, Subcommand)]
enum RdpCommand {
    /// A single pair: A:n:k, D1:n, Dn:n, E6 or E7.
    Info { pair: RdpPair },
    /// A configuration such as "8*A:2:1 + A:3:1".
    Config { expr: Configuration },
}

#[derive(Debug, Subcommand)]
enum ChowCommand {
    /// Expand [S_n][T_n] in the basis H^2, R_1..R_n.
    Expand {
        #[command(flatten)]
        deg: Degrees,
        /// Type of (S, C), zero-padded to n entries.
        #[arg(long, default_value = "()")]
        p: TypeSequence,
    },
}

/// What a command produced, ready to render in any format.
struct Output {
    human: String,
    json: Value,
    /// Header and rows; when absent the JSON is flattened.
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Output {
    fn new(human: impl Into<String>, value: &impl Serialize) -> Result<Self> {
        let json = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Output {
            human: human.into(),
            json,
            table: None,
        })
    }

    fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header.iter().map(|h| h.to_string()).collect(), rows));
        self
    }

    fn render(self, format: Format) -> Result<String> {
        match format {
            Format::Human => Ok(self.human),
            Format::Json => Ok(serde_json::to_string(&self.json).expect("values serialize")),
            Format::Csv => {
                let (header, rows) = match self.table {
                    Some(t) => t,
                    None => flatten(&self.json),
                };
                let mut w = csv::Writer::from_writer(Vec::new());
                let err = |e: csv::Error| Error::Parse(e.to_string());
                w.write_record(&header).map_err(err)?;
                for r in rows {
                    w.write_record(&r).map_err(err)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
                let text = String::from_utf8(bytes).expect("csv output is utf-8");
                Ok(text.trim_end().to_string())
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// A list of objects becomes one row per object; anything else becomes
/// `field,value` rows.
fn flatten(v: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    match v {
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let header: Vec<String> = items[0]
                .as_object()
                .expect("object")
                .keys()
                .cloned()
                .collect();
            let rows = items
                .iter()
                .map(|it| header.iter().map(|k| cell(&it[k])).collect())
                .collect();
            (header, rows)
        }
        Value::Object(map) => (
            vec!["field".into(), "value".into()],
            map.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect(),
        ),
        other => (vec!["value".into()], vec![vec![cell(other)]]),
    }
}

/// A bare integer in JSON, using the same number-or-string convention as
/// every other field.
#[derive(Serialize)]
struct Big<'a>(#[serde(with = "crate::arith::bigint_json")] &'a BigInt);

fn join<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn execute(command: Command) -> Result<Output> {
    match command {
        Command::Rdp(RdpCommand::Info { pair }) => {
            let inv = Configuration::new().with(pair, 1).invariants()?;
            let blowup = pair
                .blowup()
                .map_or("smooth".to_string(), |b| b.to_string());
            let human = format!(
                "pair: {pair}\ntype: {}\norder: {}\ndelta: {}\nsigma: {}\ndeficiency: {}\nblowup: {blowup}",
                inv.type_seq, inv.order, inv.delta, inv.sigma, inv.deficiency
            );
            Output::new(human, &inv)
        }
        Command::Rdp(RdpCommand::Config { expr }) => {
            let inv = expr.invariants()?;
            let miyaoka = expr
                .miyaoka_sum()
                .map_or_else(|_| "n/a (D or E member)".into(), |m| m.to_string());
            let human = format!(
                "configuration: {expr}\ntype: {}\norder: {}\ndelta: {}\nsigma: {}\ndeficiency: {}\nmiyaoka: {miyaoka}",
                inv.type_seq, inv.order, inv.delta, inv.sigma, inv.deficiency
            );
            Output::new(human, &inv)
        }
        Command::Phi { n, k } => {
            let ty = phi(n, k)?;
            Output::new(ty.to_string(), &ty)
        }
        Command::Chow(ChowCommand::Expand { deg, p }) => {
            let ctx = BlowupContext::for_surface(deg.s, deg.t, deg.d, deg.g, p.entries())?;
            let ex = st_expansion(deg.s, deg.t, &ctx)?;
            let class = crate::chow::CycleClass::from_rulings(ex.a.clone());
            let human = format!(
                "n: {}\nH^2: {}\na: ({})\nclass: {class}",
                ctx.n(),
                ex.h2_coeff,
                join(&ex.a)
            );
            let rows =
                ex.a.iter()
                    .enumerate()
                    .map(|(i, a)| vec![(i + 1).to_string(), a.to_string()])
                    .collect();
            Ok(Output::new(human, &ex)?.with_table(&["m", "a"], rows))
        }
        Command::Thm1(deg) => {
            let v = thm1_value(&deg.params()?)?;
            let human = format!(
                "{}{}",
                v.value,
                if v.integral { "" } else { " (not an integer)" }
            );
            Output::new(human, &v)
        }
        Command::Thm2 { deg, p } => {
            let r = thm2_margins(&deg.params()?, &p)?;
            let mut human = Vec::new();
            for (k, ((l, rh), m)) in r.lhs.iter().zip(&r.rhs).zip(&r.margins).enumerate() {
                human.push(format!("k={}: {l} >= {rh} (margin {m})", k + 1));
            }
            human.push(format!("holds: {}", r.holds));
            let rows = (0..r.lhs.len())
                .map(|k| {
                    vec![
                        (k + 1).to_string(),
                        r.lhs[k].to_string(),
                        r.rhs[k].to_string(),
                        r.margins[k].to_string(),
                    ]
                })
                .collect();
            Ok(Output::new(human.join("\n"), &r)?.with_table(&["k", "lhs", "rhs", "margin"], rows))
        }
        Command::Thm3 {
            s,
            d,
            g,
            ty,
            config,
            truncate,
        } => {
            let ty = match (ty, config) {
                (Some(t), _) => t,
                (None, Some(c)) => c.type_seq(),
                (None, None) => unreachable!("clap requires one of --type and --config"),
            };
            let r = thm3_check(s, d, g, &ty, truncate)?;
            let human = format!("lhs: {}\nrhs: {}\nholds: {}", r.lhs, r.rhs, r.holds);
            Output::new(human, &r)
        }
        Command::Bound { s } => {
            #[derive(Serialize)]
            struct Bounds {
                s: u64,
                #[serde(with = "crate::arith::bigint_json")]
                resolution: BigInt,
                miyaoka: Rational,
            }
            let b = Bounds {
                s,
                resolution: resolution_bound(s),
                miyaoka: miyaoka_bound(s),
            };
            let human = format!("resolution: {}\nmiyaoka: {}", b.resolution, b.miyaoka);
            Output::new(human, &b)
        }
        Command::Kbound { s, d, g, l } => {
            let b = kformula_bound(s, d, g, l);
            Output::new(b.to_string(), &Big(&b))
        }
        Command::Bungo => {
            #[derive(Serialize)]
            struct Row {
                n: u64,
                #[serde(rename = "type")]
                ty: TypeSequence,
                lhs: Rational,
            }
            let rows: Vec<Row> = bungobungo_solve()
                .into_iter()
                .map(|(n, ty)| Row {
                    n,
                    lhs: bungo_lhs(n, &ty),
                    ty,
                })
                .collect();
            let human = rows
                .iter()
                .map(|r| format!("n={} {}", r.n, r.ty))
                .collect::<Vec<_>>()
                .join("\n");
            Output::new(human, &rows)
        }
        Command::SearchConfig {
            ty,
            max_def,
            max_sigma,
            delta,
            miyaoka_budget,
            contains,
        } => {
            let cons = ConfigConstraints {
                max_deficiency: max_def,
                max_sigma,
                require_delta: delta,
                miyaoka_budget,
                must_contain: contains,
            };
            let found = config_search(&ty, &cons)?;
            let human = if found.is_empty() {
                "no configurations".to_string()
            } else {
                found
                    .iter()
                    .map(|m| {
                        let miy = m.miyaoka.as_ref().map_or("n/a".into(), ToString::to_string);
                        format!(
                            "{}  (order {}, delta {}, deficiency {}, miyaoka {miy})",
                            m.configuration,
                            m.invariants.order,
                            m.invariants.delta,
                            m.invariants.deficiency
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            let rows = found
                .iter()
                .map(|m| {
                    vec![
                        m.configuration.to_string(),
                        m.invariants.type_seq.to_string(),
                        m.invariants.order.to_string(),
                        m.invariants.delta.to_string(),
                        m.invariants.sigma.to_string(),
                        m.invariants.deficiency.to_string(),
                        m.miyaoka
                            .as_ref()
                            .map_or(String::new(), ToString::to_string),
                    ]
                })
                .collect();
            Ok(Output::new(human, &found)?.with_table(
                &[
                    "configuration",
                    "type",
                    "order",
                    "delta",
                    "sigma",
                    "deficiency",
                    "miyaoka",
                ],
                rows,
            ))
        }
        Command::Enumerate {
            d,
            g,
            one_sided,
            s_max,
            t_max,
        } => {
            let opts = EnumerateOptions {
                symmetric: !one_sided,
                s_max,
                t_max,
            };
            let recs = enumerate_pairs(d, g, opts)?;
            let rows = recs
                .iter()
                .map(|r| {
                    vec![
                        r.s.to_string(),
                        r.t.to_string(),
                        r.n.to_string(),
                        r.p_s.to_string(),
                        r.p_t.to_string(),
                    ]
                })
                .collect();
            Ok(Output::new(format_pair_list(&recs), &recs)?
                .with_table(&["s", "t", "n", "p_s", "p_t"], rows))
        }
        Command::Thma(deg) => {
            let v = thma_verdict(&deg.params()?);
            let status = serde_json::to_value(v.status).expect("status serializes");
            let human = format!(
                "status: {}\nd <= g + 3: {}\n{}",
                cell(&status),
                v.conclusion,
                v.witness
            );
            Output::new(human, &v)
        }
        Command::Graph { base, history } => {
            let g = LabeledGraph::from_history(base, &parse_history(&history)?)?;
            let class = strict_transform_class(&g)?;
            let order = g.order().ok();
            #[derive(Serialize)]
            struct Report<'a> {
                graph: &'a LabeledGraph,
                order: Option<u64>,
                strict_transform: String,
            }
            let human = format!(
                "vertices: {}..{}\nedges: {}\nmu: ({})\norder: {}\nclass: {class}",
                g.base(),
                g.top(),
                join(
                    &g.edges()
                        .map(|(a, b)| format!("({a},{b})"))
                        .collect::<Vec<_>>()
                ),
                join(g.mu_values()),
                order.map_or("undefined".into(), |o| o.to_string()),
            );
            Output::new(
                human,
                &Report {
                    graph: &g,
                    order,
                    strict_transform: class.to_string(),
                },
            )
        }
        Command::Snort { a } => {
            let r = snort_check(&a);
            let human = format!("margins: ({})\nholds: {}", join(&r.margins), r.holds);
            let rows = r
                .margins
                .iter()
                .enumerate()
                .map(|(i, m)| vec![(i + 1).to_string(), m.to_string()])
                .collect();
            Ok(Output::new(human, &r)?.with_table(&["k", "margin"], rows))
        }
    }
}

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// 0 on success, 1 on a domain error, 2 on a usage error.
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli.command).and_then(|out| out.render(cli.format)) {
        Ok(text) => Outcome {
            code: 0,
            stdout: format!("{text}\n"),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
