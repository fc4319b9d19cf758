//! Command-line front end. Every `cmd_*` returns the text it would print so
//! the commands can be exercised without a process boundary.
//!
//! Any flag can also be set through an environment variable named
//! `COMMITTEE_POWER_<FLAG>`, e.g. `COMMITTEE_POWER_THREADS=1`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cache::SweepCache;
use crate::equivalence::{enumerate_classes, s_scores, ReferenceTable, DEFAULT_MAX_REFERENCE_SUM};
use crate::error::{Error, Result};
use crate::grid::{WeightGrid, DEFAULT_DENOMINATOR};
use crate::model::{Profile, Ranking, ScoringCommittee, ScoringVector};
use crate::power::pbi;
use crate::rational::{
    format_decimal, format_fraction, format_rational, int, parse_rational, parse_rational_list,
    ratio, Rational,
};
use crate::render::{render_series, Compute, RenderOptions, SweepSource};
use crate::scoring::score_totals;

pub const ENV_PREFIX: &str = "COMMITTEE_POWER_";

#[derive(Debug, Parser)]
#[command(
    name = "committee-power",
    version,
    about = "Voting power and structural classes of weighted scoring committees"
)]
pub struct Cli {
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "text",
        env = "COMMITTEE_POWER_FORMAT"
    )]
    pub format: Format,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "COMMITTEE_POWER_THREADS")]
    pub threads: Option<usize>,

    /// Decimal places for approximate values.
    #[arg(
        long,
        global = true,
        default_value_t = 4,
        env = "COMMITTEE_POWER_PRECISION"
    )]
    pub precision: usize,

    /// Directory for cached sweeps.
    #[arg(long, global = true, env = "COMMITTEE_POWER_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct RuleArgs {
    /// Scoring parameter for (1, s, 0), as a fraction or decimal.
    #[arg(long, env = "COMMITTEE_POWER_S", conflicts_with = "scores")]
    pub s: Option<String>,

    /// Full scoring vector, e.g. "2,1,0". Overrides the default of three alternatives.
    #[arg(long, env = "COMMITTEE_POWER_SCORES")]
    pub scores: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Totals and winner for one preference profile.
    Winner {
        #[arg(long, env = "COMMITTEE_POWER_WEIGHTS")]
        weights: String,
        #[command(flatten)]
        rule: RuleArgs,
        /// One ranking per player, comma separated, e.g. "B>C>A, A>C>B".
        #[arg(long, env = "COMMITTEE_POWER_PROFILE")]
        profile: String,
        /// Alternative names, comma separated. Defaults to A, B, C, ...
        #[arg(long, env = "COMMITTEE_POWER_ALTERNATIVES")]
        alternatives: Option<String>,
    },
    /// Penrose-Banzhaf power of every player.
    Power {
        #[arg(long, env = "COMMITTEE_POWER_WEIGHTS")]
        weights: String,
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Structural classes of three-player weights for one s.
    Classes {
        #[arg(long, env = "COMMITTEE_POWER_S")]
        s: String,
        #[arg(long, default_value_t = DEFAULT_DENOMINATOR, env = "COMMITTEE_POWER_GRID_DENOMINATOR")]
        grid_denominator: u32,
        /// Largest integer weight sum searched for reference weights.
        #[arg(long, default_value_t = DEFAULT_MAX_REFERENCE_SUM, env = "COMMITTEE_POWER_MAX_REFERENCE_SUM")]
        max_reference_sum: u64,
    },
    /// Class counts over a list of s values.
    Sweep {
        /// Comma-separated s values; defaults to 0, 1/20, ..., 1.
        #[arg(long, env = "COMMITTEE_POWER_S")]
        s: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DENOMINATOR, env = "COMMITTEE_POWER_GRID_DENOMINATOR")]
        grid_denominator: u32,
    },
    /// Simplex power maps, one PNG per s plus a manifest.
    Render {
        /// Comma-separated s values.
        #[arg(long, env = "COMMITTEE_POWER_S")]
        s: String,
        #[arg(long, default_value_t = DEFAULT_DENOMINATOR, env = "COMMITTEE_POWER_GRID_DENOMINATOR")]
        grid_denominator: u32,
        /// Image width and height in pixels.
        #[arg(long, default_value_t = 900, env = "COMMITTEE_POWER_SIZE")]
        size: u32,
        #[arg(long, default_value = ".", env = "COMMITTEE_POWER_OUT")]
        out: PathBuf,
        /// Widen classes that lie on lines of the simplex to this many pixels.
        #[arg(
            long,
            num_args = 0..=1,
            default_missing_value = "2",
            env = "COMMITTEE_POWER_ENLARGE_THIN_CLASSES"
        )]
        enlarge_thin_classes: Option<u32>,
    },
}

/// Parses arguments, runs the command on a pool of the requested size and
/// returns its output.
pub fn run(cli: &Cli) -> Result<String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::Invalid("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Dependency(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<String> {
    let ctx = Context {
        format: cli.format,
        precision: cli.precision,
    };
    match &cli.command {
        Command::Winner {
            weights,
            rule,
            profile,
            alternatives,
        } => cmd_winner(&ctx, weights, rule, profile, alternatives.as_deref()),
        Command::Power { weights, rule } => cmd_power(&ctx, weights, rule),
        Command::Classes {
            s,
            grid_denominator,
            max_reference_sum,
        } => cmd_classes(&ctx, s, *grid_denominator, *max_reference_sum),
        Command::Sweep {
            s,
            grid_denominator,
        } => cmd_sweep(&ctx, s.as_deref(), *grid_denominator),
        Command::Render {
            s,
            grid_denominator,
            size,
            out,
            enlarge_thin_classes,
        } => {
            let mut options = RenderOptions::new(*size);
            options.enlarge_thin_classes = *enlarge_thin_classes;
            cmd_render(
                &ctx,
                s,
                *grid_denominator,
                &options,
                out,
                cli.cache_dir.as_ref(),
            )
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub format: Format,
    pub precision: usize,
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn scoring_from(rule: &RuleArgs) -> Result<ScoringVector> {
    match (&rule.s, &rule.scores) {
        (_, Some(scores)) => ScoringVector::new(parse_rational_list(scores)?),
        (Some(s), None) => ScoringVector::from_s(&parse_rational(s)?),
        (None, None) => ScoringVector::from_s(&int(0)),
    }
}

fn default_names(m: usize) -> Vec<String> {
    (0..m)
        .map(|a| char::from(b'A' + a as u8).to_string())
        .collect()
}

fn parse_names(text: &str) -> Result<Vec<String>> {
    let names: Vec<String> = text.split(',').map(|n| n.trim().to_string()).collect();
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || n.contains('>') {
            return Err(Error::Invalid(format!(
                "alternative name {:?} is not usable",
                n
            )));
        }
        if names[..i].contains(n) {
            return Err(Error::Invalid(format!("alternative name {n:?} repeats")));
        }
    }
    Ok(names)
}

/// A name, or a letter standing for the alternative at that index.
fn lookup(names: &[String], token: &str) -> Option<usize> {
    names
        .iter()
        .position(|n| n.eq_ignore_ascii_case(token))
        .or_else(|| {
            let mut chars = token.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_alphabetic() => {
                    let a = (c.to_ascii_uppercase() as u8 - b'A') as usize;
                    (a < names.len()).then_some(a)
                }
                _ => None,
            }
        })
}

/// Parses one ranking such as `B>C>A`. `offset` is added to every error position.
pub fn parse_ranking(text: &str, names: &[String], offset: usize) -> Result<Ranking> {
    let err = |position: usize, message: String| Error::Parse {
        input: text.to_string(),
        position: offset + position,
        message,
    };
    let mut order = Vec::with_capacity(names.len());
    let mut start = 0;
    for token in text.split('>') {
        let lead = token.len() - token.trim_start().len();
        let name = token.trim();
        let at = start + lead;
        let Some(a) = lookup(names, name) else {
            let message = if name.is_empty() {
                "expected an alternative".to_string()
            } else {
                format!("unknown alternative {name:?}")
            };
            return Err(err(at, message));
        };
        if order.contains(&a) {
            return Err(err(at, format!("alternative {name:?} ranked twice")));
        }
        order.push(a);
        start += token.len() + 1;
    }
    if order.len() != names.len() {
        return Err(err(
            text.len(),
            format!(
                "ranking lists {} of {} alternatives",
                order.len(),
                names.len()
            ),
        ));
    }
    Ranking::new(order)
}

/// Parses a comma-separated list of rankings into a profile.
pub fn parse_profile(text: &str, names: &[String]) -> Result<Profile> {
    let mut rankings = Vec::new();
    let mut start = 0;
    for part in text.split(',') {
        let r = parse_ranking(part, names, start).map_err(|e| match e {
            Error::Parse {
                position, message, ..
            } => Error::Parse {
                input: text.to_string(),
                position,
                message,
            },
            other => other,
        })?;
        rankings.push(r);
        start += part.len() + 1;
    }
    Profile::new(rankings)
}

pub fn cmd_winner(
    ctx: &Context,
    weights: &str,
    rule: &RuleArgs,
    profile: &str,
    alternatives: Option<&str>,
) -> Result<String> {
    let scoring = scoring_from(rule)?;
    let names = match alternatives {
        Some(text) => parse_names(text)?,
        None => default_names(scoring.len()),
    };
    if names.len() != scoring.len() {
        return Err(Error::Shape(format!(
            "{} alternative names for a scoring vector of length {}",
            names.len(),
            scoring.len()
        )));
    }
    let committee = ScoringCommittee::new(parse_rational_list(weights)?, scoring)?;
    let profile = parse_profile(profile, &names)?;
    let totals = score_totals(&committee, &profile)?;
    let w = totals.winner();

    Ok(match ctx.format {
        Format::Json => to_json(&json!({
            "totals": names.iter().zip(totals.totals()).map(|(n, t)| json!({
                "alternative": n,
                "total": format_rational(t),
            })).collect::<Vec<_>>(),
            "winner": names[w],
        })),
        Format::Csv => {
            let mut out = String::from("alternative,total,winner\n");
            for (a, (n, t)) in names.iter().zip(totals.totals()).enumerate() {
                out.push_str(&format!("{n},{},{}\n", format_rational(t), a == w));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (n, t) in names.iter().zip(totals.totals()) {
                out.push_str(&format!("{n}: {}\n", format_rational(t)));
            }
            out.push_str(&format!("winner: {}\n", names[w]));
            out
        }
    })
}

pub fn cmd_power(ctx: &Context, weights: &str, rule: &RuleArgs) -> Result<String> {
    let committee = ScoringCommittee::new(parse_rational_list(weights)?, scoring_from(rule)?)?;
    let power = pbi(&committee)?;
    let den = power.denominator();
    let rows: Vec<(usize, u64, Rational, String)> = power
        .swing_counts()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let v = power.value(i);
            let d = format_decimal(&v, ctx.precision);
            (i + 1, c, v, d)
        })
        .collect();

    Ok(match ctx.format {
        Format::Json => to_json(&json!({
            "denominator": den,
            "players": rows.iter().map(|(i, c, v, d)| json!({
                "player": i,
                "swings": c,
                "pbi": format_fraction(v),
                "decimal": d,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("player,swings,denominator,pbi,decimal\n");
            for (i, c, v, d) in &rows {
                out.push_str(&format!("{i},{c},{den},{},{d}\n", format_fraction(v)));
            }
            out
        }
        Format::Text => rows
            .iter()
            .map(|(i, c, v, d)| format!("player {i}: {c}/{den} = {} ~ {d}\n", format_rational(v)))
            .collect(),
    })
}

fn triple(w: &[u64; 3]) -> String {
    format!("({},{},{})", w[0], w[1], w[2])
}

pub fn cmd_classes(
    ctx: &Context,
    s: &str,
    denominator: u32,
    max_reference_sum: u64,
) -> Result<String> {
    let s = parse_rational(s)?;
    let scores = s_scores(&s)?;
    let set = enumerate_classes(&s, &WeightGrid::new(denominator)?)?;
    let references = ReferenceTable::build(&scores, max_reference_sum)?;

    struct Row {
        id: usize,
        reference: Option<[u64; 3]>,
        members: u64,
        representative: [Rational; 3],
        pbi: Vec<Rational>,
    }
    let mut rows = Vec::with_capacity(set.len());
    for (id, class) in set.classes.iter().enumerate() {
        let representative = class.relative_weights();
        let committee = ScoringCommittee::with_s(representative.to_vec(), &s)?;
        let reference = match references.lookup(&class.key) {
            Ok(r) => Some(r),
            Err(Error::NotFound { .. }) => None,
            Err(e) => return Err(e),
        };
        rows.push(Row {
            id: id + 1,
            reference,
            members: class.members,
            representative,
            pbi: pbi(&committee)?.values(),
        });
    }

    let fractions = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
    Ok(match ctx.format {
        Format::Json => to_json(&json!({
            "s": format_rational(&s),
            "grid_denominator": denominator,
            "count": rows.len(),
            "classes": rows.iter().map(|r| json!({
                "id": r.id,
                "reference_weights": r.reference,
                "members": r.members,
                "representative": fractions(&r.representative),
                "pbi": fractions(&r.pbi),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv | Format::Text => {
            let mut out = String::from("id,reference,members,representative,pbi1,pbi2,pbi3\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.id,
                    r.reference.as_ref().map_or("none".to_string(), triple),
                    r.members,
                    fractions(&r.representative).join(":"),
                    r.pbi
                        .iter()
                        .map(|v| if ctx.format == Format::Text {
                            format_decimal(v, ctx.precision)
                        } else {
                            format_rational(v)
                        })
                        .collect::<Vec<_>>()
                        .join(","),
                ));
            }
            out
        }
    })
}

/// 0, 1/20, ..., 1.
pub fn default_s_values() -> Vec<Rational> {
    (0..=20).map(|k| ratio(k, 20)).collect()
}

pub fn cmd_sweep(ctx: &Context, s: Option<&str>, denominator: u32) -> Result<String> {
    let values = match s {
        Some(text) => parse_rational_list(text)?,
        None => default_s_values(),
    };
    let grid = WeightGrid::new(denominator)?;
    let mut counts = Vec::with_capacity(values.len());
    for v in &values {
        counts.push((v.clone(), enumerate_classes(v, &grid)?.len()));
    }
    Ok(match ctx.format {
        Format::Json => to_json(&json!({
            "grid_denominator": denominator,
            "counts": counts.iter().map(|(s, c)| json!({"s": format_rational(s), "count": c})).collect::<Vec<_>>(),
        })),
        Format::Csv | Format::Text => {
            let mut out = String::from("s,count\n");
            for (s, c) in &counts {
                out.push_str(&format!("{},{c}\n", format_rational(s)));
            }
            out
        }
    })
}

pub fn cmd_render(
    ctx: &Context,
    s: &str,
    denominator: u32,
    options: &RenderOptions,
    out: &std::path::Path,
    cache_dir: Option<&PathBuf>,
) -> Result<String> {
    let values = parse_rational_list(s)?;
    let cache = cache_dir.map(SweepCache::new);
    let source: &dyn SweepSource = match &cache {
        Some(c) => c,
        None => &Compute,
    };
    let series = render_series(&values, denominator, options, out, source)?;
    let mut warnings = cache
        .as_ref()
        .map(SweepCache::take_warnings)
        .unwrap_or_default();
    let (hits, computed) = cache
        .as_ref()
        .map_or((0, values.len()), |c| (c.hits(), c.computed()));
    let images: Vec<String> = series
        .images
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    Ok(match ctx.format {
        Format::Json => to_json(&json!({
            "images": images,
            "manifest": series.manifest.display().to_string(),
            "grid_denominator": denominator,
            "sweeps_computed": computed,
            "sweeps_cached": hits,
            "warnings": warnings,
        })),
        Format::Csv | Format::Text => {
            let mut text = String::new();
            for w in warnings.drain(..) {
                text.push_str(&format!("warning: {w}\n"));
            }
            for i in &images {
                text.push_str(&format!("{i}\n"));
            }
            text.push_str(&format!("{}\n", series.manifest.display()));
            text.push_str(&format!(
                "sweeps computed: {computed}, from cache: {hits}\n"
            ));
            text
        }
    })
}

/// Process exit status for an error category; 2 is left to argument errors.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 3,
        Error::Invalid(_) => 4,
        Error::Shape(_) => 5,
        Error::SizeLimit { .. } => 6,
        Error::OutOfRange { .. } => 7,
        Error::Contract(_) => 8,
        Error::NotFound { .. } => 9,
        Error::Dependency(_) => 10,
        Error::Io { .. } => 11,
        Error::Encoding(_) => 12,
    }
}

/// One-line JSON error for stderr.
pub fn error_report(e: &Error) -> String {
    let mut v = json!({"category": e.category(), "message": e.to_string()});
    if let Error::Parse { position, .. } = e {
        v["position"] = json!(position);
    }
    json!({ "error": v }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        default_names(3)
    }

    #[test]
    fn ranking_parses_with_spaces_and_case() {
        let r = parse_ranking(" b > C>a", &names(), 0).unwrap();
        assert_eq!(r.order().collect::<Vec<_>>(), vec![1, 2, 0]);
    }

    #[test]
    fn names_and_letters_mix() {
        let named: Vec<String> = ["Ann", "Bob", "Clara"].map(String::from).to_vec();
        let r = parse_ranking("Clara>A>bob", &named, 0).unwrap();
        assert_eq!(r.order().collect::<Vec<_>>(), vec![2, 0, 1]);
        assert!(parse_ranking("D>A>B", &named, 0).is_err());
    }

    #[test]
    fn enlarge_default_matches_library() {
        use clap::Parser;
        let cli =
            Cli::try_parse_from(["x", "render", "--s", "0", "--enlarge-thin-classes"]).unwrap();
        match cli.command {
            Command::Render {
                enlarge_thin_classes,
                ..
            } => {
                assert_eq!(
                    enlarge_thin_classes,
                    Some(crate::render::DEFAULT_ENLARGE_RADIUS)
                )
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn ranking_errors_carry_positions() {
        let pos = |text: &str| match parse_ranking(text, &names(), 0).unwrap_err() {
            Error::Parse { position, .. } => position,
            e => panic!("{e}"),
        };
        assert_eq!(pos("A>X>C"), 2);
        assert_eq!(pos("A>B>A"), 4);
        assert_eq!(pos("A>B"), 3);
        assert_eq!(pos("A>>B"), 2);
    }

    #[test]
    fn profile_positions_are_absolute() {
        match parse_profile("A>B>C,B>Q>C", &names()).unwrap_err() {
            Error::Parse {
                position, input, ..
            } => {
                assert_eq!(position, 8);
                assert_eq!(input, "A>B>C,B>Q>C");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn exit_codes_are_distinct() {
        let errs = [
            Error::Parse {
                input: String::new(),
                position: 0,
                message: String::new(),
            },
            Error::Invalid(String::new()),
            Error::Shape(String::new()),
            Error::SizeLimit {
                what: "x",
                actual: 1,
                bound: 0,
            },
            Error::OutOfRange { index: 1, len: 0 },
            Error::Contract(String::new()),
            Error::NotFound { bound: 1 },
            Error::Dependency(String::new()),
            Error::Encoding(String::new()),
        ];
        let mut codes: Vec<i32> = errs.iter().map(exit_code).collect();
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), errs.len());
        assert!(!codes.contains(&0) && !codes.contains(&2));
    }

    #[test]
    fn error_report_is_json() {
        let e = parse_ranking("A>Z>C", &names(), 0).unwrap_err();
        let v: Value = serde_json::from_str(&error_report(&e)).unwrap();
        assert_eq!(v["error"]["category"], "parse");
        assert_eq!(v["error"]["position"], 2);
    }
}
