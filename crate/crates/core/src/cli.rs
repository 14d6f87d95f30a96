//! Command-line interface.
//!
//! ```text
//! cubic-fatpoints types list
//! cubic-fatpoints types classify --neg "0: AB, CD; 2: ABCDEF"
//! cubic-fatpoints hilbert --type 86 --mults 3,3,3,3,3,3 [--tmax 12]
//! cubic-fatpoints betti --type "1: ABC, ADE" --mults 2,2,2,2,2,2
//! cubic-fatpoints tables --which 1|2
//! cubic-fatpoints verify [--seed 0]
//! ```
//!
//! Every command takes `--format text|json|csv`. Exit status is 0 on success,
//! 1 for bad input or usage, 2 when a consistency check fails.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fatpoints::{analyze, module_string, table2, FatPointReport, FatPointScheme, Multiplicities, Shift};
use crate::lattice::{DivisorClass, N_POINTS};
use crate::notation::parse_negset;
use crate::typeenum::{all_types, classify, table1, type_by_id, ConfigurationType};
use crate::verify::{run_invariant_suite, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "cubic-fatpoints", version, about = "Configuration types of six points with -K nef, and Betti numbers of fat points on them")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List or classify configuration types.
    Types {
        #[command(subcommand)]
        action: TypesAction,
    },
    /// Hilbert function of a fat point ideal.
    Hilbert {
        /// Table row id, or (-2)-curves in letter notation.
        #[arg(long = "type")]
        ty: String,
        /// Six multiplicities, comma separated.
        #[arg(long)]
        mults: String,
        /// Print values through this degree.
        #[arg(long)]
        tmax: Option<i64>,
    },
    /// Graded Betti numbers of a fat point ideal.
    Betti {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        mults: String,
    },
    /// Print a table: 1 (types) or 2 (outcomes for Z and 2Z).
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum TypesAction {
    List,
    Classify {
        #[arg(long)]
        neg: String,
    },
}

#[derive(Serialize)]
struct TypeRecord<'a> {
    id: u32,
    label: &'a str,
    neg: &'a str,
    classes: Vec<[i64; 7]>,
    graph: &'a str,
    torsion: String,
}

impl<'a> TypeRecord<'a> {
    fn of(t: &'a ConfigurationType) -> Self {
        TypeRecord {
            id: t.id,
            label: &t.label,
            neg: &t.notation,
            classes: t.classes.iter().map(DivisorClass::to_array).collect(),
            graph: &t.graph.name,
            torsion: t.torsion.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ResolutionRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    type_id: Option<u32>,
    mults: Multiplicities,
    reduced_mults: Multiplicities,
    #[serde(rename = "F0")]
    f0: Vec<Shift>,
    #[serde(rename = "F1")]
    f1: Vec<Shift>,
    #[serde(rename = "hilbert_I")]
    hilbert_i: Vec<i64>,
    #[serde(rename = "hilbert_Z")]
    hilbert_z: Vec<i64>,
    #[serde(rename = "degZ")]
    deg_z: i64,
    tail_from: i64,
}

impl ResolutionRecord {
    fn of(r: &FatPointReport, tmax: Option<i64>) -> Self {
        let last = tmax.unwrap_or(r.hilbert.tail_from);
        ResolutionRecord {
            type_id: r.type_id,
            mults: r.input_mults,
            reduced_mults: r.mults,
            f0: r.resolution.f0.clone(),
            f1: r.resolution.f1.clone(),
            hilbert_i: (0..=last).map(|t| r.hilbert.ideal_at(t)).collect(),
            hilbert_z: (0..=last).map(|t| r.hilbert.quotient_at(t)).collect(),
            deg_z: r.hilbert.degree,
            tail_from: r.hilbert.tail_from,
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",") + "\n"
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn parse_mults(text: &str) -> Result<Multiplicities, String> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| format!("bad multiplicity {:?}", s.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<i64>| format!("expected {N_POINTS} multiplicities, got {}", v.len()))
}

fn scheme_for(ty: &str, mults: Multiplicities) -> Result<FatPointScheme> {
    match ty.trim().parse::<u32>() {
        Ok(id) => FatPointScheme::for_type(type_by_id(id)?, mults),
        Err(_) => FatPointScheme::new(&parse_negset(ty)?, mults),
    }
}

fn types_table(types: &[&ConfigurationType], format: Format) -> String {
    match format {
        Format::Json => to_json(&types.iter().map(|t| TypeRecord::of(t)).collect::<Vec<_>>()),
        Format::Csv => {
            let mut s = csv_row(&["id", "label", "neg", "graph", "torsion"].map(String::from));
            for t in types {
                s += &csv_row(&[t.id.to_string(), t.label.clone(), t.notation.clone(), t.graph.name.clone(), t.torsion.to_string()]);
            }
            s
        }
        Format::Text => types
            .iter()
            .map(|t| format!("{:>2}  {:<10} {:<36} {:<9} {}\n", t.id, t.label, t.notation, t.graph.name, t.torsion))
            .collect(),
    }
}

fn hilbert_output(r: &FatPointReport, tmax: Option<i64>, format: Format) -> String {
    let rec = ResolutionRecord::of(r, tmax);
    match format {
        Format::Json => to_json(&rec),
        Format::Csv => {
            let mut s = csv_row(&["t", "h_I", "h_Z"].map(String::from));
            for (t, (i, z)) in rec.hilbert_i.iter().zip(&rec.hilbert_z).enumerate() {
                s += &csv_row(&[t.to_string(), i.to_string(), z.to_string()]);
            }
            s
        }
        Format::Text => {
            let mut s = format!("mults: {} (reduced {})\ndeg Z: {}\n", join(&rec.mults, ","), join(&rec.reduced_mults, ","), rec.deg_z);
            s += "t\th_I\th_Z\n";
            for (t, (i, z)) in rec.hilbert_i.iter().zip(&rec.hilbert_z).enumerate() {
                s += &format!("{t}\t{i}\t{z}\n");
            }
            s += &format!("h_I(t) = C(t+2,2) - {} and h_Z(t) = {} for t >= {}\n", rec.deg_z, rec.deg_z, rec.tail_from);
            s
        }
    }
}

fn betti_output(r: &FatPointReport, format: Format) -> String {
    match format {
        Format::Json => to_json(&ResolutionRecord::of(r, None)),
        Format::Csv => {
            let mut s = csv_row(&["module", "shift", "mult"].map(String::from));
            for (name, module) in [("F0", &r.resolution.f0), ("F1", &r.resolution.f1)] {
                for sh in module {
                    s += &csv_row(&[name.to_string(), sh.shift.to_string(), sh.mult.to_string()]);
                }
            }
            s
        }
        Format::Text => format!(
            "mults: {} (reduced {})\nF0 = {}\nF1 = {}\n",
            join(&r.input_mults, ","),
            join(&r.mults, ","),
            module_string(&r.resolution.f0),
            module_string(&r.resolution.f1)
        ),
    }
}

fn pairs(v: &[(i64, i64)]) -> Vec<Shift> {
    v.iter().map(|&(shift, mult)| Shift { shift, mult }).collect()
}

fn table2_output(format: Format) -> Result<String> {
    let cases = table2()?;
    Ok(match format {
        Format::Json => to_json(
            &cases
                .iter()
                .map(|c| {
                    json!({
                        "case": c.name,
                        "types": c.types,
                        "Z": {"hilbert_Z": c.z.quotient, "F0": pairs(&c.z.f0), "F1": pairs(&c.z.f1)},
                        "2Z": {"hilbert_Z": c.z2.quotient, "F0": pairs(&c.z2.f0), "F1": pairs(&c.z2.f1)},
                    })
                })
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut s = csv_row(&["case", "scheme", "hilbert_Z", "F1", "F0", "types"].map(String::from));
            for c in &cases {
                for (scheme, o) in [("Z", &c.z), ("2Z", &c.z2)] {
                    s += &csv_row(&[
                        c.name.unwrap_or("?").to_string(),
                        scheme.to_string(),
                        join(&o.quotient, " "),
                        module_string(&pairs(&o.f1)),
                        module_string(&pairs(&o.f0)),
                        join(&c.types, " "),
                    ]);
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &cases {
                s += &format!("case {}: types {}\n", c.name.unwrap_or("?"), join(&c.types, ", "));
                for (scheme, o) in [("Z", &c.z), ("2Z", &c.z2)] {
                    s += &format!(
                        "  {scheme}: F1 = {}, F0 = {}, h_Z = {}\n",
                        module_string(&pairs(&o.f1)),
                        module_string(&pairs(&o.f0)),
                        join(&o.quotient, ", ")
                    );
                }
            }
            s
        }
    })
}

/// Payload and exit status.
fn dispatch(cli: Cli) -> Result<(String, i32)> {
    let format = cli.format;
    let output = match cli.command {
        Command::Types { action: TypesAction::List } => types_table(&all_types().iter().collect::<Vec<_>>(), format),
        Command::Types { action: TypesAction::Classify { neg } } => {
            let c = classify(&parse_negset(&neg)?)?;
            match format {
                Format::Json => {
                    let mut v = serde_json::to_value(TypeRecord::of(c.ty)).expect("serializable");
                    v["rows"] = json!(c.rows);
                    to_json(&v)
                }
                _ if c.rows.len() > 1 => {
                    let shared = format!("rows {} are one orbit\n", join(&c.rows, ", "));
                    types_table(&[c.ty], format) + &shared
                }
                _ => types_table(&[c.ty], format),
            }
        }
        Command::Hilbert { ty, mults, tmax } => {
            let m = parse_mults(&mults).map_err(Error::InvalidArgument)?;
            if tmax.is_some_and(|t| t < 0) {
                return Err(Error::InvalidArgument("--tmax must be nonnegative".into()));
            }
            hilbert_output(&analyze(&scheme_for(&ty, m)?)?, tmax, format)
        }
        Command::Betti { ty, mults } => {
            let m = parse_mults(&mults).map_err(Error::InvalidArgument)?;
            betti_output(&analyze(&scheme_for(&ty, m)?)?, format)
        }
        Command::Tables { which: 1 } => match format {
            Format::Text => table1(),
            _ => types_table(&all_types().iter().collect::<Vec<_>>(), format),
        },
        Command::Tables { .. } => table2_output(format)?,
        Command::Verify { seed } => {
            let checks = run_invariant_suite(seed);
            let code = if checks.iter().all(|c| c.passed) { 0 } else { 2 };
            let out = match format {
                Format::Json => to_json(&checks),
                Format::Csv => {
                    let mut s = csv_row(&["check", "passed", "detail"].map(String::from));
                    for c in &checks {
                        s += &csv_row(&[c.name.to_string(), c.passed.to_string(), c.detail.clone()]);
                    }
                    s
                }
                Format::Text => checks
                    .iter()
                    .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                    .collect(),
            };
            return Ok((out, code));
        }
    };
    Ok((output, 0))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match catch_unwind(AssertUnwindSafe(|| dispatch(cli))) {
        Ok(Ok((payload, code))) => {
            let _ = out.write_all(payload.as_bytes());
            code
        }
        Ok(Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("internal error");
            let _ = writeln!(err, "internal error: {msg}");
            2
        }
    }
}
