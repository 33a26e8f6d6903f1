//! Argument parsing and command dispatch for the `betagray` binary.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use betagray::fullgray::{CodeItem, CodeRecord, FullGray, MapClass, Variant};
use betagray::maps::{map_to_tree, tree_to_map, RotationMap};
use betagray::verify::{catalan, check_gray, check_map, count_bicubic, count_cubic_nonseparable, Oracle};
use betagray::{decode, dyck_gray, DyckGray, Error, RootMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "betagray", version, about = "Cyclic Gray codes for description trees and bicubic maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stream the cyclic 2-Gray listing of prefix words with m ones and k zeros.
    Dyck {
        m: usize,
        k: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stream the cyclic 3-Gray listing of β(a,b)-trees on n vertices.
    Trees {
        n: usize,
        #[command(flatten)]
        params: Params,
        /// Cyclic per-shape lists (the default).
        #[arg(long, conflicts_with = "path")]
        cyclic: bool,
        /// Non-cyclic per-shape lists; block boundaries are then unbounded.
        #[arg(long)]
        path: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stream tree codes for a map class; bicubic codes come with their maps.
    Maps {
        /// Tree vertex count; bicubic maps have 2(n-1) vertices.
        n: usize,
        #[arg(long, value_parser = parse_class)]
        class: MapClass,
        /// Print codes only.
        #[arg(long)]
        no_maps: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check listings and maps against the brute-force oracle.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Print formula and oracle counts side by side.
    Count {
        n: usize,
        #[arg(long, value_parser = parse_class)]
        class: MapClass,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyTarget {
    /// Cyclicity, distance bounds and boundary words of the prefix-word listing.
    Dyck {
        m: usize,
        k: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gray property and completeness of the tree listing.
    Trees {
        n: usize,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Also check the last-to-first distance.
        #[arg(long)]
        cyclic: bool,
        /// Verify the listing built from non-cyclic per-shape lists.
        #[arg(long)]
        path: bool,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Validity, round trip and image count of the bicubic bijection for
    /// every tree size up to n.
    Maps {
        n: usize,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Params {
    #[arg(long = "a", default_value_t = 0)]
    pub a: u32,
    #[arg(long = "b", default_value_t = 1)]
    pub b: u32,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct OracleArgs {
    /// Largest n the oracle may enumerate.
    #[arg(long, default_value_t = betagray::verify::DEFAULT_LIMIT)]
    pub max_n: usize,
    /// Worker threads for the oracle.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
}

impl OracleArgs {
    fn oracle(&self) -> Oracle {
        Oracle { limit: self.max_n, jobs: self.jobs as usize }
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Stop after this many items.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Print only the number of items.
    #[arg(long)]
    pub count_only: bool,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn parse_class(s: &str) -> Result<MapClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<bool, Failure>;

/// Parses `args` (program name first) and runs the command, writing to
/// `stdout` unless `--output` is given. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILED
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Outcome {
    match command {
        Command::Dyck { m, k, out } => with_output(&out, stdout, |w| dyck(m, k, &out, w)),
        Command::Trees { n, params, path, out, .. } => {
            let variant = if path { Variant::Path } else { Variant::Cyclic };
            with_output(&out, stdout, |w| trees(n, params, variant, &out, w))
        }
        Command::Maps { n, class, no_maps, out } => with_output(&out, stdout, |w| maps(n, class, !no_maps, &out, w)),
        Command::Count { n, class, oracle, out } => with_output(&out, stdout, |w| count(n, class, oracle, &out, w)),
        Command::Verify { target } => match target {
            VerifyTarget::Dyck { m, k, out } => with_output(&out, stdout, |w| verify_dyck(m, k, &out, w)),
            VerifyTarget::Trees { n, params, bound, cyclic, path, oracle, out } => {
                let variant = if path { Variant::Path } else { Variant::Cyclic };
                with_output(&out, stdout, |w| verify_trees(n, params, bound, cyclic, variant, oracle, &out, w))
            }
            VerifyTarget::Maps { n, oracle, out } => with_output(&out, stdout, |w| verify_maps(n, oracle, &out, w)),
        },
    }
}

fn with_output(out: &OutputArgs, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Outcome) -> Outcome {
    match &out.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            let ok = body(&mut w)?;
            w.flush()?;
            Ok(ok)
        }
        None => {
            let mut w = BufWriter::new(stdout);
            let ok = body(&mut w)?;
            w.flush()?;
            Ok(ok)
        }
    }
}

fn json_line(w: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer(&mut *w, value).map_err(io::Error::from)?;
    writeln!(w)
}

/// Writes up to `--limit` items, or only their count.
fn stream<T>(
    items: impl Iterator<Item = Result<T, Error>>,
    out: &OutputArgs,
    w: &mut dyn Write,
    mut emit: impl FnMut(&T, &mut dyn Write) -> Result<(), Failure>,
) -> Outcome {
    let mut count = 0usize;
    for item in items.take(out.limit.unwrap_or(usize::MAX)) {
        let item = item?;
        if !out.count_only {
            emit(&item, w)?;
        }
        count += 1;
    }
    if out.count_only {
        match out.format {
            Format::Text => writeln!(w, "{count}")?,
            Format::Json => json_line(w, &serde_json::json!({ "count": count }))?,
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct WordRecord {
    index: usize,
    bits: String,
}

fn dyck(m: usize, k: usize, out: &OutputArgs, w: &mut dyn Write) -> Outcome {
    let words = DyckGray::new(m, k)?.enumerate().map(Ok);
    stream(words, out, w, |(index, word), w| {
        match out.format {
            Format::Text => writeln!(w, "{word}")?,
            Format::Json => {
                let bits = word.to_digits().iter().map(|d| char::from(b'0' + d)).collect();
                json_line(w, &WordRecord { index: *index, bits })?
            }
        }
        Ok(())
    })
}

fn emit_code(item: &CodeItem, format: Format, w: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Text => writeln!(w, "{}", item.code),
        Format::Json => json_line(w, &CodeRecord::from(item)),
    }
}

fn trees(n: usize, params: Params, variant: Variant, out: &OutputArgs, w: &mut dyn Write) -> Outcome {
    let codes = FullGray::with_variant(n, params.a, params.b, variant)?;
    stream(codes, out, w, |item, w| Ok(emit_code(item, out.format, w)?))
}

#[derive(Serialize)]
struct MapRecord<'a> {
    #[serde(flatten)]
    code: CodeRecord,
    map: Option<MapJson<'a>>,
}

#[derive(Serialize)]
struct MapJson<'a> {
    vertex_colors: &'a [betagray::maps::Color],
    alpha: &'a [usize],
    face_colors: &'a [u8],
    root: usize,
}

fn maps(n: usize, class: MapClass, with_maps: bool, out: &OutputArgs, w: &mut dyn Write) -> Outcome {
    let (a, b) = class.params();
    let draw = with_maps && class == MapClass::Bicubic && n >= 2;
    let codes = FullGray::new(n, a, b)?;
    stream(codes, out, w, |item, w| {
        let map = if draw {
            let tree = decode(&item.code, a, b)?.with_root_mode(RootMode::SumPlusOne);
            Some(tree_to_map(&tree)?.canonicalized())
        } else {
            None
        };
        match out.format {
            Format::Text => {
                writeln!(w, "{}", item.code)?;
                if let Some(m) = &map {
                    write!(w, "{}", m.to_text())?;
                    writeln!(w)?;
                }
            }
            Format::Json => {
                let map = map.as_ref().map(|m: &RotationMap| MapJson {
                    vertex_colors: m.vertex_colors(),
                    alpha: &m.raw().alpha,
                    face_colors: m.face_colors(),
                    root: m.root(),
                });
                json_line(w, &MapRecord { code: CodeRecord::from(item), map })?;
            }
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct CountRecord {
    class: String,
    n: usize,
    map_vertices: Option<usize>,
    formula: Option<String>,
    oracle: String,
    agree: Option<bool>,
}

fn count(n: usize, class: MapClass, oracle: OracleArgs, out: &OutputArgs, w: &mut dyn Write) -> Outcome {
    if n < 2 {
        return Err(Failure::Usage("count needs n >= 2".into()));
    }
    let (a, b) = class.params();
    let m = n as u64 - 1;
    let formula = match class {
        MapClass::Bicubic => Some(count_bicubic(m)?),
        MapClass::CubicNonseparable => Some(count_cubic_nonseparable(m)?),
        MapClass::Cubic3Connected => None,
    };
    let found = oracle.oracle().enumerate(n, a, b, RootMode::Star)?.len();
    let agree = formula.as_ref().map(|f| *f == found.into());
    let record = CountRecord {
        class: class.to_string(),
        n,
        map_vertices: class.map_vertices(n),
        formula: formula.map(|f| f.to_string()),
        oracle: found.to_string(),
        agree,
    };
    match out.format {
        Format::Text => {
            writeln!(w, "class: {}", record.class)?;
            writeln!(w, "n: {n}")?;
            writeln!(w, "map_vertices: {}", record.map_vertices.map_or("-".into(), |v| v.to_string()))?;
            writeln!(w, "formula: {}", record.formula.as_deref().unwrap_or("-"))?;
            writeln!(w, "oracle: {}", record.oracle)?;
            writeln!(w, "agree: {}", record.agree.map_or("-".into(), |v| v.to_string()))?;
        }
        Format::Json => json_line(w, &record)?,
    }
    Ok(agree.unwrap_or(true))
}

fn pass_line(w: &mut dyn Write, name: &str, ok: bool) -> io::Result<()> {
    writeln!(w, "check {name}: {}", if ok { "pass" } else { "fail" })
}

fn verify_dyck(m: usize, k: usize, out: &OutputArgs, w: &mut dyn Write) -> Outcome {
    let words = dyck_gray(m, k)?;
    let distinct = words.iter().collect::<HashSet<_>>().len() == words.len();
    let steps_ok =
        words.len() < 2 || (0..words.len()).all(|i| words[i].hamming(&words[(i + 1) % words.len()]) == Some(2));
    let first = betagray::dyck::first_word(m, k)?;
    let last = betagray::dyck::last_word(m, k)?;
    let ends_ok = words.first() == Some(&first) && words.last() == Some(&last);
    let count_ok = m != k || catalan(m as u64) == words.len().into();
    let checks =
        [("distinct", distinct), ("cyclic-2-gray", steps_ok), ("boundary-words", ends_ok), ("catalan-count", count_ok)];
    let pass = checks.iter().all(|c| c.1);
    match out.format {
        Format::Text => {
            writeln!(w, "total: {}", words.len())?;
            for (name, ok) in checks {
                pass_line(w, name, ok)?;
            }
            writeln!(w, "result: {}", if pass { "pass" } else { "fail" })?;
        }
        Format::Json => {
            let checks: serde_json::Map<String, serde_json::Value> =
                checks.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect();
            json_line(w, &serde_json::json!({ "total": words.len(), "checks": checks, "pass": pass }))?;
        }
    }
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn verify_trees(
    n: usize,
    params: Params,
    bound: usize,
    cyclic: bool,
    variant: Variant,
    oracle: OracleArgs,
    out: &OutputArgs,
    w: &mut dyn Write,
) -> Outcome {
    let set = oracle.oracle().enumerate(n, params.a, params.b, RootMode::Star)?;
    let list = FullGray::with_variant(n, params.a, params.b, variant)?
        .map(|item| item.map(|i| i.code))
        .collect::<Result<Vec<_>, _>>()?;
    let report = check_gray(&list, bound, cyclic, Some(&set));
    match out.format {
        Format::Text => writeln!(w, "{report}")?,
        Format::Json => json_line(w, &report)?,
    }
    Ok(report.pass)
}

#[derive(Serialize, Default)]
struct MapSuite {
    sizes: Vec<MapSize>,
    pass: bool,
}

#[derive(Serialize)]
struct MapSize {
    tree_vertices: usize,
    map_vertices: usize,
    trees: usize,
    distinct_maps: usize,
    formula: String,
    invalid_maps: usize,
    round_trip_failures: usize,
    statistic_failures: usize,
}

impl MapSize {
    fn pass(&self) -> bool {
        self.distinct_maps == self.trees
            && self.formula == self.trees.to_string()
            && self.invalid_maps == 0
            && self.round_trip_failures == 0
            && self.statistic_failures == 0
    }
}

fn verify_maps(n: usize, oracle: OracleArgs, out: &OutputArgs, w: &mut dyn Write) -> Outcome {
    let mut suite = MapSuite::default();
    for size in 2..=n {
        let codes = oracle.oracle().enumerate(size, 0, 1, RootMode::Star)?;
        let mut seen = HashSet::with_capacity(codes.len());
        let mut row = MapSize {
            tree_vertices: size,
            map_vertices: 2 * (size - 1),
            trees: codes.len(),
            distinct_maps: 0,
            formula: count_bicubic(size as u64 - 1)?.to_string(),
            invalid_maps: 0,
            round_trip_failures: 0,
            statistic_failures: 0,
        };
        for code in &codes {
            let tree = decode(code, 0, 1)?.with_root_mode(RootMode::SumPlusOne);
            let map = tree_to_map(&tree)?;
            if !check_map(map.raw()).pass {
                row.invalid_maps += 1;
            }
            if map_to_tree(&map).ok().as_ref() != Some(&tree) {
                row.round_trip_failures += 1;
            }
            if map.f1r3() != tree.root().unwrap_or(0) as usize || map.s1r3() != tree.sub() {
                row.statistic_failures += 1;
            }
            seen.insert(map.canonical());
        }
        row.distinct_maps = seen.len();
        suite.sizes.push(row);
    }
    suite.pass = suite.sizes.iter().all(MapSize::pass);
    match out.format {
        Format::Text => {
            for s in &suite.sizes {
                writeln!(
                    w,
                    "n {} map_vertices {} trees {} distinct_maps {} formula {} invalid {} round_trip_failures {} statistic_failures {} {}",
                    s.tree_vertices,
                    s.map_vertices,
                    s.trees,
                    s.distinct_maps,
                    s.formula,
                    s.invalid_maps,
                    s.round_trip_failures,
                    s.statistic_failures,
                    if s.pass() { "pass" } else { "fail" }
                )?;
            }
            writeln!(w, "result: {}", if suite.pass { "pass" } else { "fail" })?;
        }
        Format::Json => json_line(w, &suite)?,
    }
    Ok(suite.pass)
}
