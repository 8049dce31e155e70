//! Command-line front end.

pub mod cache;
pub mod expr;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::charclass::{
    chern_image_in, closed_form_c1, closed_form_c3, f_leading_b_coefficient, invert_unitriangular, matrix_a,
    splitting_oracle,
};
use crate::cohomring::{CohomologyModel, ElemJson, LabeledElem};
use crate::error::{Error, Result};
use crate::graded::{hilbert_series, lambda_part_dim, SeriesKind};
use crate::presentation::{cohomology_presentation, gens_i, gens_n, koszul_assignment, koszul_presentation, DegreeCheck};
use crate::ring2::{PolyJson, Poly2, RingHandle};

use cache::{Cache, CacheKey};
use expr::{parse_expr_in, Parsed};

const MAX_N: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "gocohom", version, about = "Mod 2 cohomology of BGO(2n)")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for per-degree results.
    #[arg(long, global = true, env = "GOCOHOM_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Koszul,
    Presentation,
    Cohomology,
    Chern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Series {
    Stiefel,
    Kernel,
    Cohomology,
}

fn parse_n(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (1..=MAX_N).contains(&n) {
        Ok(n)
    } else {
        Err(format!("n must be between 1 and {MAX_N}"))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Labeled basis of H^d.
    Basis {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Product of two elements.
    Mul {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        x: String,
        y: String,
    },
    /// Coordinates of an element over the basis of H^d.
    Coords {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        #[arg(long)]
        degree: u32,
        x: String,
    },
    /// Image of the mod 2 Chern class c_i.
    Chern {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        #[arg(long)]
        i: usize,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Graded dimensions.
    Series {
        #[arg(long, value_parser = parse_n)]
        n: usize,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = Series::Cohomology)]
        kind: Series,
    },
    /// Bases of H^0 through H^5.
    Table {
        #[arg(long, value_parser = parse_n)]
        n: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut buf)),
            Err(e) => Err(Error::InvalidRing(format!("thread pool: {e}"))),
        },
        None => execute(&cli, &mut buf),
    };
    if out.write_all(&buf).and_then(|_| out.flush()).is_err() {
        return 2;
    }
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn emit(out: &mut dyn Write, format: Format, text: &str, value: serde_json::Value) -> Result<()> {
    match format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?,
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BasisEntry {
    label: String,
    monomial: PolyJson,
    element: ElemJson,
}

fn open_cache(cli: &Cli) -> Result<Option<Cache>> {
    cli.cache_dir.as_ref().map(Cache::new).transpose()
}

fn cached_basis(model: &CohomologyModel, cache: Option<&Cache>, d: u32) -> Result<Vec<LabeledElem>> {
    let compute = || -> Result<Vec<BasisEntry>> {
        Ok(model
            .basis(d)?
            .into_iter()
            .map(|b| BasisEntry {
                label: b.label,
                monomial: b.monomial.to_json(),
                element: b.element.to_json(),
            })
            .collect())
    };
    let entries = match cache {
        Some(c) => c.get_or_compute(&CacheKey::new(model.n(), d, "basis"), compute)?,
        None => compute()?,
    };
    entries
        .into_iter()
        .map(|e| {
            Ok(LabeledElem {
                monomial: Poly2::from_json(model.presentation_ring(), &e.monomial)?,
                element: model.element_from_json(&e.element)?,
                label: e.label,
            })
        })
        .collect()
}

fn cached_check<F>(cache: Option<&Cache>, n: usize, d: u32, kind: &str, compute: F) -> Result<DegreeCheck>
where
    F: FnOnce() -> Result<DegreeCheck>,
{
    match cache {
        Some(c) => c.get_or_compute(&CacheKey::new(n, d, kind), compute),
        None => compute(),
    }
}

fn parse_class(model: &CohomologyModel, text: &str) -> Result<Parsed> {
    parse_expr_in(text, model)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let cache = open_cache(cli)?;
    let format = cli.format;
    match &cli.command {
        Command::Basis { n, degree } => {
            let model = CohomologyModel::new(*n)?;
            let basis = cached_basis(&model, cache.as_ref(), *degree)?;
            let labels: Vec<&str> = basis.iter().map(|b| b.label.as_str()).collect();
            let value = json!(basis
                .iter()
                .map(|b| json!({"label": b.label, "element": b.element.to_json()}))
                .collect::<Vec<_>>());
            emit(out, format, &labels.join(", "), value)?;
        }
        Command::Mul { n, x, y } => {
            let model = CohomologyModel::new(*n)?;
            match (parse_class(&model, x)?, parse_class(&model, y)?) {
                (Parsed::Class { element: a, .. }, Parsed::Class { element: b, .. }) => {
                    let product = a.try_mul(&b)?;
                    let normal = model.normal_form(&product)?;
                    let value = json!({"n": n, "product": normal.to_string(), "element": product.to_json()});
                    emit(out, format, &normal.to_string(), value)?;
                }
                (Parsed::Poly(a), Parsed::Poly(b)) => {
                    let product = a.try_mul(&b)?;
                    let value = json!({"n": n, "product": product.to_string(), "poly": product.to_json()});
                    emit(out, format, &product.to_string(), value)?;
                }
                _ => {
                    return Err(Error::Parse {
                        offset: 0,
                        message: "both factors must use the same variables".into(),
                    })
                }
            }
        }
        Command::Coords { n, degree, x } => {
            let model = CohomologyModel::new(*n)?;
            let Parsed::Class { element, .. } = parse_class(&model, x)? else {
                return Err(Error::Parse {
                    offset: 0,
                    message: "expected a cohomology class".into(),
                });
            };
            let basis = cached_basis(&model, cache.as_ref(), *degree)?;
            let coords = model.coords_in(&basis, &element, *degree)?;
            let bits: Vec<u8> = (0..basis.len()).map(|i| coords.get(i) as u8).collect();
            let text = bits.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
            let labels: Vec<&str> = basis.iter().map(|b| b.label.as_str()).collect();
            let value = json!({"n": n, "degree": degree, "labels": labels, "coords": bits});
            emit(out, format, &text, value)?;
        }
        Command::Chern { n, i } => {
            let model = CohomologyModel::new(*n)?;
            let c = chern_image_in(&model, *i)?;
            let value = serde_json::to_value(c.to_json())?;
            emit(out, format, &format!("c{i} = {}", c.formula), value)?;
        }
        Command::Series { n, max_degree, kind } => {
            let kind = match kind {
                Series::Stiefel => SeriesKind::Stiefel,
                Series::Kernel => SeriesKind::Kernel,
                Series::Cohomology => SeriesKind::Cohomology,
            };
            let dims = hilbert_series(kind, *n, *max_degree)?;
            let text = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
            emit(out, format, &text, json!({"n": n, "kind": kind, "dims": dims}))?;
        }
        Command::Table { n } => {
            let model = CohomologyModel::new(*n)?;
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for d in 0..=5 {
                let labels: Vec<String> = cached_basis(&model, cache.as_ref(), d)?.into_iter().map(|b| b.label).collect();
                lines.push(format!("H^{d} = <{}>", labels.join(", ")));
                rows.push(json!({"degree": d, "labels": labels}));
            }
            emit(out, format, &lines.join("\n"), json!({"n": n, "rows": rows}))?;
        }
        Command::Verify { n, max_degree, suite } => {
            let checks = verify(*n, *max_degree, *suite, cache.as_ref())?;
            let ok = checks.iter().all(|c| c.ok);
            let text = checks
                .iter()
                .map(|c| {
                    let status = if c.ok { "ok" } else { "FAIL" };
                    match &c.detail {
                        Some(detail) => format!("{:<13}{} ... {status} ({detail})", c.suite, c.name),
                        None => format!("{:<13}{} ... {status}", c.suite, c.name),
                    }
                })
                .collect::<Vec<_>>()
                .join("\n");
            emit(out, format, &text, json!({"n": n, "max_degree": max_degree, "ok": ok, "checks": checks}))?;
            return Ok(ok);
        }
    }
    Ok(true)
}

/// One line of `verify` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub ok: bool,
    pub detail: Option<String>,
}

fn check(suite: &str, name: &str, outcome: Result<Vec<String>>) -> Check {
    let (ok, detail) = match outcome {
        Ok(failures) if failures.is_empty() => (true, None),
        Ok(failures) => (false, Some(failures.join("; "))),
        Err(e) => (false, Some(e.to_string())),
    };
    Check {
        suite: suite.to_string(),
        name: name.to_string(),
        ok,
        detail,
    }
}

fn failing_degrees(checks: &[DegreeCheck]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("d={}: {} != {}", c.d, c.dim_lhs, c.dim_rhs))
        .collect()
}

/// Runs the selected suites for `n` up to `max_degree`.
pub fn verify(n: usize, max_degree: u32, suite: Suite, cache: Option<&Cache>) -> Result<Vec<Check>> {
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let model = CohomologyModel::new(n)?;
    let kernel = model.kernel();
    let mut checks = Vec::new();

    if wants(Suite::Koszul) {
        let s = kernel.derivation();
        checks.push(check("koszul", "s^2 = 0", {
            let bad: Vec<String> = (0..=max_degree)
                .into_par_iter()
                .flat_map_iter(|d| kernel.c().enumerate_monomials(d))
                .filter_map(|m| {
                    let once = s.apply_monomial(&m);
                    match s.apply(&once) {
                        Ok(twice) if twice.is_zero() => None,
                        _ => Some(m.format(kernel.c())),
                    }
                })
                .collect();
            Ok(bad)
        }));
        checks.push(check("koszul", "ker(s) = im(s) + A", {
            let bad = (0..=max_degree)
                .into_par_iter()
                .map(|d| kernel.verify_ker_decomposition(d))
                .filter(|r| !r.ok)
                .map(|r| format!("d={}: span {} != kernel {}", r.degree, r.span_dim, r.kernel_dim))
                .collect();
            Ok(bad)
        }));
        checks.push(check(
            "koszul",
            "Koszul relations vanish in C",
            (|| {
                let images = koszul_assignment(kernel);
                let mut bad = Vec::new();
                for rel in gens_n(n) {
                    if !rel.poly.substitute(kernel.c(), &images)?.is_zero() {
                        bad.push(rel.poly.to_string());
                    }
                }
                Ok(bad)
            })(),
        ));
    }

    if wants(Suite::Presentation) {
        let lb = model.lambda_b();
        let koszul = koszul_presentation(n);
        checks.push(check(
            "presentation",
            "A[c_T]/N has the dimensions of B",
            (0..=max_degree)
                .into_par_iter()
                .map(|d| {
                    cached_check(cache, n, d, "koszul-quotient", || {
                        let (lhs, rhs) = (koszul.quotient_dim(d), kernel.kernel_dim(d));
                        Ok(DegreeCheck {
                            d,
                            dim_lhs: lhs,
                            dim_rhs: rhs,
                            ok: lhs == rhs,
                        })
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map(|c| failing_degrees(&c)),
        ));
        let cohom = cohomology_presentation(n);
        checks.push(check(
            "presentation",
            "R/I has the dimensions of H",
            (0..=max_degree)
                .into_par_iter()
                .map(|d| {
                    cached_check(cache, n, d, "cohomology-quotient", || {
                        let lhs = cohom.quotient_dim(d);
                        let rhs = lambda_part_dim(lb, d) + kernel.kernel_dim(d);
                        Ok(DegreeCheck {
                            d,
                            dim_lhs: lhs,
                            dim_rhs: rhs,
                            ok: lhs == rhs,
                        })
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map(|c| failing_degrees(&c)),
        ));
    }

    if wants(Suite::Cohomology) {
        checks.push(check(
            "cohomology",
            "rho kills every relation",
            model
                .rho_well_defined()
                .map(|ok| if ok { vec![] } else { vec!["nonzero image".into()] }),
        ));
        checks.push(check(
            "cohomology",
            "relations vanish in the pair model",
            (|| {
                let mut bad = Vec::new();
                for rel in gens_i(n) {
                    if !model.evaluate(&rel.poly)?.is_zero() {
                        bad.push(rel.poly.to_string());
                    }
                }
                Ok(bad)
            })(),
        ));
        let bases = (0..=max_degree)
            .into_par_iter()
            .map(|d| cached_basis(&model, cache, d))
            .collect::<Result<Vec<_>>>();
        let name = "basis sizes match the short exact sequence";
        match bases {
            Err(e) => checks.push(check("cohomology", name, Err(e))),
            Ok(bases) => {
                let bad = bases
                    .iter()
                    .enumerate()
                    .filter_map(|(d, b)| {
                        let expected = lambda_part_dim(model.lambda_b(), d as u32) + kernel.kernel_dim(d as u32);
                        (b.len() != expected).then(|| format!("d={d}: {} != {expected}", b.len()))
                    })
                    .collect();
                checks.push(check("cohomology", name, Ok(bad)));
                let mut bad = Vec::new();
                for b in bases.iter().flatten() {
                    match parse_expr_in(&b.label, &model) {
                        Ok(Parsed::Class { element, .. }) if element == b.element => {}
                        _ => bad.push(b.label.clone()),
                    }
                }
                checks.push(check("cohomology", "labels parse back to their elements", Ok(bad)));
            }
        }
    }

    if wants(Suite::Chern) {
        checks.push(check(
            "chern",
            "A * A^-1 = 1",
            invert_unitriangular(&matrix_a(n)).map(|b| {
                if matrix_a(n).mul(&b).is_identity() {
                    vec![]
                } else {
                    vec!["product is not the identity".into()]
                }
            }),
        ));
        checks.push(check(
            "chern",
            "c_i restricts to w_i^2",
            (|| {
                let mut bad = Vec::new();
                for i in 1..=2 * n {
                    let c = chern_image_in(&model, i)?;
                    let ok = c.element.q() == &model.c().var(i - 1).square()
                        && model.membership_check(c.element.p(), c.element.q());
                    if !ok {
                        bad.push(format!("c{i}"));
                    }
                }
                Ok(bad)
            })(),
        ));
        checks.push(check(
            "chern",
            "closed forms of c1 and c3",
            (|| {
                let mut bad = Vec::new();
                if chern_image_in(&model, 1)?.formula != closed_form_c1(&model)? {
                    bad.push("c1".into());
                }
                if n >= 2 && chern_image_in(&model, 3)?.formula != closed_form_c3(&model)? {
                    bad.push("c3".into());
                }
                Ok(bad)
            })(),
        ));
        checks.push(check(
            "chern",
            "b coefficient of f_r is n-r+1",
            (|| {
                let mut bad = Vec::new();
                for r in 2..=n {
                    if f_leading_b_coefficient(n, r)? != ((n - r + 1) % 2 == 1) {
                        bad.push(format!("r={r}"));
                    }
                }
                Ok(bad)
            })(),
        ));
        checks.push(check(
            "chern",
            "splitting principle",
            splitting_oracle(n).map(|report| {
                let odd = report.odd_ok.iter().enumerate().filter(|(_, ok)| !**ok);
                let even = report.even_ok.iter().enumerate().filter(|(_, ok)| !**ok);
                odd.map(|(r, _)| format!("c{}", 2 * r + 1))
                    .chain(even.map(|(r, _)| format!("c{}", 2 * r + 2)))
                    .collect()
            }),
        ));
    }

    Ok(checks)
}
