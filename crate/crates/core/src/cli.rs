//! The `mgl` command line.
//!
//! Exit codes: 0 on success, 1 when an input fails validation or a check
//! finds a violation, 2 on usage errors, unreadable or malformed input, and
//! enumeration guards.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::complexes::{euler_characteristic, order_complex};
use crate::error::Error;
use crate::io::{self, ComplexFile, PointFile, PosetFile, Vector};
use crate::matroid::{
    enumerate_matroids, exchange_violation, MatroidVector, DEFAULT_MATROID_GUARD,
};
use crate::operad::{check_action_compatibility, check_operad_laws, operad_act, operad_compose};
use crate::oriented::{chirotope_violation, enumerate_oriented_matroids, DEFAULT_CHIROTOPE_GUARD};
use crate::orval::{check_fiber_finality, oriented_cell_poset, oriented_plucker_violation};
use crate::sums_sliding::{direct_sum, slide, SimplexPoint};
use crate::valuated::{
    check_closure_relation, enumerate_dressian_cells, tropical_plucker_violation,
};

#[derive(Debug, Parser)]
#[command(
    name = "mgl",
    version,
    about = "Exact computation with matroids and their valuated and oriented relatives"
)]
pub struct Cli {
    /// Replace the default enumeration cap on the number of coordinates.
    #[arg(long, global = true, value_name = "N")]
    pub guard_override: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Matroid,
    Tropical,
    Chirotope,
    Orval,
}

#[derive(Debug, clap::Args)]
pub struct Shape {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a vector file against the axioms of its kind.
    Validate {
        #[arg(long, value_enum)]
        kind: Kind,
        file: PathBuf,
    },
    /// Same as `validate --kind orval`.
    OrvalValidate { file: PathBuf },
    /// All matroids of rank d on n elements.
    Matroids {
        #[command(flatten)]
        shape: Shape,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// The specialization poset of oriented matroids.
    Macp {
        #[command(flatten)]
        shape: Shape,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Nonempty Dressian cells with interior witnesses.
    Dressian {
        #[command(flatten)]
        shape: Shape,
        /// Only cells over the uniform matroid.
        #[arg(long)]
        uniform: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Cells of oriented valuated matroids and their poset.
    OrvalCells {
        #[command(flatten)]
        shape: Shape,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare the closure LP with the combinatorial order on all cell pairs.
    ClosureCheck {
        #[command(flatten)]
        shape: Shape,
    },
    /// Check the fibres of the projection from cells to oriented matroids.
    FibersCheck {
        #[command(flatten)]
        shape: Shape,
    },
    /// Order complex of a poset file.
    Nerve {
        poset: PathBuf,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Euler characteristic of a complex file.
    Euler { complex: PathBuf },
    /// Direct sum of two signed vectors.
    Dsum {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Slide a rational vector along an injection family.
    Slide {
        phi: PathBuf,
        family: PathBuf,
        /// Weights such as "1/3,2/3".
        #[arg(long)]
        t: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Operad(OperadCommand),
}

#[derive(Debug, Subcommand)]
pub enum OperadCommand {
    /// Compose along a surjection given as images, e.g. --gamma 0,0,1.
    Compose {
        #[arg(long)]
        gamma: String,
        point: PathBuf,
        family: Vec<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Act on rational vectors.
    Act {
        point: PathBuf,
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Unit, associativity and equivariance on all surjections up to a size.
    CheckLaws {
        #[arg(long)]
        seed: u64,
        /// Draws of the innermost points per composable pair.
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 20)]
        window: u128,
    },
    /// Compatibility of the action with composition.
    CheckAction {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

enum Failure {
    /// Exit 1.
    Violation(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::GuardExceeded { .. }
            | Error::WrongLength { .. }
            | Error::RankOutOfRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Violation(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx<'a> {
    guard_override: Option<usize>,
    stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn guard(&self, default: usize) -> usize {
        self.guard_override.unwrap_or(default)
    }

    fn emit(&mut self, text: &str, out: Option<&Path>) -> Outcome {
        match out {
            Some(p) => fs::write(p, text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
        }
    }

    fn emit_json<T: Serialize>(&mut self, value: &T, out: Option<&Path>) -> Outcome {
        self.emit(&io::to_json(value), out)
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_vector(path: &Path) -> std::result::Result<Vector, Failure> {
    Ok(io::parse_vector(&read(path)?)?)
}

fn read_rational(path: &Path) -> std::result::Result<crate::orval::RationalVector, Failure> {
    io::as_rational(read_vector(path)?).map_err(Failure::from)
}

fn read_point(path: &Path) -> std::result::Result<crate::operad::ConvexCombination, Failure> {
    Ok(io::from_json::<PointFile>(&read(path)?)?.parse()?)
}

fn validate(ctx: &mut Ctx, kind: Kind, file: &Path) -> Outcome {
    let v = read_vector(file)?;
    let verdict: Option<String> = match (kind, v) {
        (Kind::Matroid, Vector::Matroid(m)) => match exchange_violation(&m) {
            Ok(v) => v.map(|x| format!("not a matroid: {x}")),
            Err(e) => Some(e.to_string()),
        },
        (Kind::Tropical, Vector::Tropical(t)) => {
            tropical_plucker_violation(&t).map(|x| format!("not a tropical Plücker vector: {x}"))
        }
        (Kind::Chirotope, Vector::Signs(s)) => match chirotope_violation(&s) {
            Ok(v) => v.map(|x| format!("not a chirotope: {x}")),
            Err(e) => Some(e.to_string()),
        },
        (Kind::Orval, Vector::SignedTropical(s)) => oriented_plucker_violation(&s)
            .map(|x| format!("not an oriented tropical Plücker vector: {x}")),
        (Kind::Orval, Vector::Rational(r)) => oriented_plucker_violation(&r)
            .map(|x| format!("not an oriented tropical Plücker vector: {x}")),
        (k, _) => {
            return Err(Failure::Usage(format!(
                "{}: payload does not match --kind {k:?}",
                file.display()
            )));
        }
    };
    match verdict {
        None => ctx.emit(
            &format!("valid {}\n", format!("{kind:?}").to_lowercase()),
            None,
        ),
        Some(msg) => Err(Failure::Violation(msg)),
    }
}

#[derive(Serialize)]
struct OrvalCellEntry {
    oriented_matroid: String,
    initial_datum: Vec<io::DatumEntry>,
    witness: io::VectorFile,
}

#[derive(Serialize)]
struct OrvalCellsFile {
    cells: Vec<OrvalCellEntry>,
    poset: PosetFile,
}

#[derive(Serialize)]
struct Header<'a, T> {
    command: &'a str,
    seed: u64,
    trials: usize,
    passed: bool,
    report: T,
}

fn dispatch(ctx: &mut Ctx, command: Command) -> Outcome {
    match command {
        Command::Validate { kind, file } => validate(ctx, kind, &file),
        Command::OrvalValidate { file } => validate(ctx, Kind::Orval, &file),
        Command::Matroids { shape, out } => {
            let ms: Vec<MatroidVector> =
                enumerate_matroids(shape.d, shape.n, ctx.guard(DEFAULT_MATROID_GUARD))?;
            let files: Vec<io::VectorFile> = ms.iter().map(io::matroid_file).collect();
            ctx.emit_json(&files, out.as_deref())
        }
        Command::Macp { shape, out } => {
            let macp =
                enumerate_oriented_matroids(shape.d, shape.n, ctx.guard(DEFAULT_CHIROTOPE_GUARD))?;
            ctx.emit_json(&io::poset_file(&macp.poset), out.as_deref())
        }
        Command::Dressian {
            shape,
            uniform,
            out,
        } => {
            let cells =
                enumerate_dressian_cells(shape.d, shape.n, ctx.guard(DEFAULT_MATROID_GUARD))?;
            let total = crate::ground::binomial(shape.n, shape.d) as usize;
            let files: Vec<io::CellFile> = cells
                .iter()
                .filter(|c| !uniform || c.id.matroid.support().len() == total)
                .map(io::cell_file)
                .collect();
            ctx.emit_json(&files, out.as_deref())
        }
        Command::OrvalCells { shape, out } => {
            let (cells, _) =
                oriented_cell_poset(shape.d, shape.n, ctx.guard(DEFAULT_CHIROTOPE_GUARD))?;
            let entries = cells
                .cells
                .iter()
                .zip(&cells.witnesses)
                .map(|(c, w)| OrvalCellEntry {
                    oriented_matroid: c.om.to_string(),
                    initial_datum: io::datum_entries(&c.datum),
                    witness: io::signed_tropical_file(w),
                })
                .collect();
            let file = OrvalCellsFile {
                cells: entries,
                poset: io::poset_file(&cells.poset),
            };
            ctx.emit_json(&file, out.as_deref())
        }
        Command::ClosureCheck { shape } => {
            let cells =
                enumerate_dressian_cells(shape.d, shape.n, ctx.guard(DEFAULT_MATROID_GUARD))?;
            let report = check_closure_relation(&cells)?;
            ctx.emit_json(&report, None)?;
            if report.is_clean() {
                Ok(())
            } else {
                Err(Failure::Violation(format!(
                    "{} closure violations",
                    report.violations.len()
                )))
            }
        }
        Command::FibersCheck { shape } => {
            let (cells, macp) =
                oriented_cell_poset(shape.d, shape.n, ctx.guard(DEFAULT_CHIROTOPE_GUARD))?;
            let report = check_fiber_finality(&cells, &macp)?;
            ctx.emit_json(&report, None)?;
            if report.is_clean() {
                Ok(())
            } else {
                Err(Failure::Violation(format!(
                    "{} fibre categories whose final object is not the cell's initial datum",
                    report.final_object_violations.len()
                )))
            }
        }
        Command::Nerve {
            poset,
            max_dim,
            out,
        } => {
            let p = io::from_json::<PosetFile>(&read(&poset)?)?.parse()?;
            let k = order_complex(&p, max_dim);
            ctx.emit_json(&io::complex_file(&k), out.as_deref())
        }
        Command::Euler { complex } => {
            let k = io::from_json::<ComplexFile>(&read(&complex)?)?.parse()?;
            ctx.emit(&format!("{}\n", euler_characteristic(&k)), None)
        }
        Command::Dsum { a, b, out } => {
            let text = match (read_vector(&a)?, read_vector(&b)?) {
                (Vector::SignedTropical(x), Vector::SignedTropical(y)) => {
                    io::to_json(&io::signed_tropical_file(&direct_sum(&x, &y)?))
                }
                (x, y) => {
                    let (x, y) = (io::as_rational(x)?, io::as_rational(y)?);
                    io::to_json(&io::rational_file(&direct_sum(&x, &y)?))
                }
            };
            ctx.emit(&text, out.as_deref())
        }
        Command::Slide {
            phi,
            family,
            t,
            out,
        } => {
            let phi = read_rational(&phi)?;
            let family = io::parse_family(&read(&family)?)?;
            let t = SimplexPoint::new(io::parse_weights(&t)?)?;
            let result = slide(&phi, &family, &t, None)?;
            ctx.emit_json(&io::rational_file(&result), out.as_deref())
        }
        Command::Operad(op) => operad(ctx, op),
    }
}

fn operad(ctx: &mut Ctx, op: OperadCommand) -> Outcome {
    match op {
        OperadCommand::Compose {
            gamma,
            point,
            family,
            out,
        } => {
            let gamma = io::parse_index_list(&gamma)?;
            let p = read_point(&point)?;
            let fam = family
                .iter()
                .map(|f| read_point(f))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let result = operad_compose(&gamma, &p, &fam)?;
            ctx.emit_json(&io::point_file(&result), out.as_deref())
        }
        OperadCommand::Act { point, inputs, out } => {
            let p = read_point(&point)?;
            let xs = inputs
                .iter()
                .map(|f| read_rational(f))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let result = operad_act(&p, &xs)?;
            ctx.emit_json(&io::rational_file(&result), out.as_deref())
        }
        OperadCommand::CheckLaws {
            seed,
            trials,
            max_size,
            window,
        } => {
            let report = check_operad_laws(max_size, seed, trials, window)?;
            let passed = report.is_clean();
            ctx.emit_json(
                &Header {
                    command: "operad check-laws",
                    seed,
                    trials,
                    passed,
                    report,
                },
                None,
            )?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Violation("operad laws fail".into()))
            }
        }
        OperadCommand::CheckAction { seed, trials } => {
            let report = check_action_compatibility(seed, trials)?;
            let passed = report.is_clean();
            ctx.emit_json(
                &Header {
                    command: "operad check-action",
                    seed,
                    trials,
                    passed,
                    report,
                },
                None,
            )?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Violation(
                    "action is not compatible with composition".into(),
                ))
            }
        }
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return if code == 0 { 0 } else { 2 };
        }
    };
    let mut ctx = Ctx {
        guard_override: cli.guard_override,
        stdout,
    };
    match dispatch(&mut ctx, cli.command) {
        Ok(()) => 0,
        Err(Failure::Violation(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn mgl(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("mgl").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    #[test]
    fn matroid_validation() {
        let dir = tempfile::tempdir().unwrap();
        let good = write(
            &dir,
            "u.json",
            r#"{"d": 2, "n": 4, "support": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#,
        );
        assert_eq!(mgl(&["validate", "--kind", "matroid", &good]).0, 0);
        let bad = write(
            &dir,
            "b.json",
            r#"{"d": 2, "n": 4, "support": [[0,1],[2,3]]}"#,
        );
        let (code, _, err) = mgl(&["validate", "--kind", "matroid", &bad]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
    }

    #[test]
    fn chirotope_validation() {
        let dir = tempfile::tempdir().unwrap();
        let good = write(
            &dir,
            "c.json",
            r#"{"d": 2, "n": 4, "signs": [1,1,1,1,1,1]}"#,
        );
        assert_eq!(mgl(&["validate", "--kind", "chirotope", &good]).0, 0);
        // all three terms of the relation are positive
        let bad = write(
            &dir,
            "d.json",
            r#"{"d": 2, "n": 4, "signs": [1,1,1,1,-1,1]}"#,
        );
        assert_eq!(mgl(&["validate", "--kind", "chirotope", &bad]).0, 1);
    }

    #[test]
    fn usage_errors_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let broken = write(&dir, "x.json", "{\"d\": 2, ");
        assert_eq!(mgl(&["validate", "--kind", "matroid", &broken]).0, 2);
        assert_eq!(mgl(&["frobnicate"]).0, 2);
        assert_eq!(mgl(&["matroids", "--d", "3", "--n", "7"]).0, 2);
        let missing = dir.path().join("none.json");
        assert_eq!(mgl(&["euler", missing.to_str().unwrap()]).0, 2);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = mgl(&["macp", "--d", "2", "--n", "4"]);
        let b = mgl(&["macp", "--d", "2", "--n", "4"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        let c = mgl(&["operad", "check-laws", "--seed", "3", "--max-size", "2"]);
        let d = mgl(&["operad", "check-laws", "--seed", "3", "--max-size", "2"]);
        assert_eq!(c.0, 0);
        assert_eq!(c.1, d.1);
    }

    #[test]
    fn nerve_of_the_cell_poset_is_contractible() {
        let dir = tempfile::tempdir().unwrap();
        let poset = dir.path().join("p.json");
        let complex = dir.path().join("k.json");
        let p = poset.to_str().unwrap();
        let k = complex.to_str().unwrap();
        assert_eq!(mgl(&["macp", "--d", "1", "--n", "3", "-o", p]).0, 0);
        assert_eq!(mgl(&["nerve", p, "-o", k]).0, 0);
        let (code, out, _) = mgl(&["euler", k]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1");
    }

    #[test]
    fn sum_and_slide_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let a = write(
            &dir,
            "a.json",
            r#"{"d": 1, "n": 2, "coords": [{"q": "1"}, {"q": "-2"}]}"#,
        );
        let b = write(
            &dir,
            "b.json",
            r#"{"d": 1, "n": 1, "coords": [{"q": "1/2"}]}"#,
        );
        let s = dir.path().join("s.json");
        assert_eq!(mgl(&["dsum", &a, &b, "-o", s.to_str().unwrap()]).0, 0);
        let sum = crate::io::parse_vector(&fs::read_to_string(&s).unwrap()).unwrap();
        let crate::io::Vector::Rational(v) = sum else {
            panic!("expected a rational vector")
        };
        assert_eq!(v.rank(), 2);
        assert_eq!(v.ground().len(), 3);

        let family = write(
            &dir,
            "f.json",
            r#"[{"map": {"0": 0, "1": 1}}, {"map": {"0": 2, "1": 3}}]"#,
        );
        let (code, out, err) = mgl(&["slide", &a, &family, "--t", "1/3,2/3"]);
        assert_eq!(code, 0, "{err}");
        assert!(matches!(
            crate::io::parse_vector(&out).unwrap(),
            crate::io::Vector::Rational(_)
        ));
        assert_eq!(mgl(&["slide", &a, &family, "--t", "1/3,1/3"]).0, 1);
    }

    #[test]
    fn operad_compose_and_act() {
        let dir = tempfile::tempdir().unwrap();
        let unit = write(
            &dir,
            "u.json",
            r#"{"arity": 1, "terms": [{"weight": "1", "vertex": [{"scale": 1, "offset": 0}]}]}"#,
        );
        let pair = write(
            &dir,
            "p.json",
            r#"{"arity": 2, "terms": [{"weight": "1", "vertex": [{"scale": 8, "offset": 1}, {"scale": 8, "offset": 5}]}]}"#,
        );
        let (code, out, err) = mgl(&["operad", "compose", "--gamma", "0,1", &pair, &unit, &unit]);
        assert_eq!(code, 0, "{err}");
        let back: crate::io::PointFile = serde_json::from_str(&out).unwrap();
        assert_eq!(back.arity, 2);
        let (code, _, err) = mgl(&["operad", "compose", "--gamma", "0,0", &pair, &unit, &unit]);
        assert_eq!(code, 1);
        assert!(err.contains("surjective"), "{err}");

        let x = write(
            &dir,
            "x.json",
            r#"{"d": 1, "n": 2, "coords": [{"q": "1"}, {"q": "1"}]}"#,
        );
        let (code, out, err) = mgl(&["operad", "act", &pair, &x, &x]);
        assert_eq!(code, 0, "{err}");
        let crate::io::Vector::Rational(v) = crate::io::parse_vector(&out).unwrap() else {
            panic!("expected a rational vector")
        };
        assert_eq!(v.rank(), 2);
    }
}
