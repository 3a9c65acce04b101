//! `quadrilift` — JSON-in/JSON-out command line for exact local–global
//! computations with quadratic forms.
//!
//! Every subcommand prints a single JSON object on stdout. Exit codes are
//! uniform across commands:
//!
//! * `0` — success (for predicate commands: the affirmative outcome),
//! * `1` — input or domain error (malformed JSON, bad rationals, …),
//! * `2` — usage error (unknown subcommand, missing flags),
//! * `3` — negative outcome (not isometric / not admissible / verdict other
//!   than `isomorphic` / failed check suite).
//!
//! Rationals travel as strings (`"3/5"`, `"-2"`), places as `"real"` or
//! `"p:<prime>"`, diagonal forms as `{"diag":["1","-2","3/5"]}`, and
//! matrices as row-major arrays of rational strings. The
//! `QUADRILIFT_SEED` environment variable (or `--seed` where offered)
//! fixes every randomized sample, so identical invocations print
//! byte-identical reports.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use quadrilift::admissibility::{
    construct_characters, globally_admissible, locally_admissible, GlobalQuadruple, Quadruple,
};
use quadrilift::localfactors::{
    partial_euler, unramified_pairing, verdict, RationalFunctionInT, UnramifiedDatum, Verdict,
};
use quadrilift::localfields::{hilbert, Place};
use quadrilift::orthogroup::{
    cartan_dieudonne, matrix_from_flat, spinor_norm, xi_eval, OrthogonalElement, QuadCharacter,
};
use quadrilift::quadforms::{
    invariants, is_isometric_global, is_isometric_local, is_isotropic_global, is_isotropic_local,
    represents_gram_local, represents_value_local, QuadraticSpace, SymMatrix,
};
use quadrilift::rational::{format_rational, parse_rational, square_free_part, Rational};
use quadrilift::selftest::run_selftest;
use quadrilift::weil_finite::{model_report, FiniteWeilModel};

#[derive(Parser)]
#[command(
    name = "quadrilift",
    version,
    about = "Exact local-global computations for quadratic forms over Q",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hilbert symbol (a,b) at one place.
    Hilbert {
        /// First argument, a rational string.
        #[arg(short, long, allow_hyphen_values = true)]
        a: String,
        /// Second argument, a rational string.
        #[arg(short, long, allow_hyphen_values = true)]
        b: String,
        /// Place: "real" or "p:<prime>".
        #[arg(long)]
        place: String,
    },
    /// Dimension, discriminant class, and Hasse symbols at the bad places.
    Invariants {
        /// Form as JSON: {"diag":["1","1","1"]}.
        #[arg(long)]
        q: String,
    },
    /// Isometry of two forms, over one completion or over Q.
    Isometric {
        #[arg(long)]
        q: String,
        #[arg(long)]
        qp: String,
        /// Restrict to one place; omit for the global question.
        #[arg(long)]
        place: Option<String>,
    },
    /// Existence of a nontrivial zero, over one completion or over Q.
    Isotropy {
        #[arg(long)]
        q: String,
        /// Restrict to one place; omit for the global question.
        #[arg(long)]
        place: Option<String>,
    },
    /// Representation of a value or of a Gram matrix over one completion.
    Represents {
        #[arg(long)]
        q: String,
        /// A rational value to represent (exclusive with --beta).
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
        /// A symmetric Gram matrix as a row-major JSON array of rational
        /// strings (exclusive with --value).
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        place: String,
    },
    /// Spinor norm (modulo squares) of an orthogonal element.
    SpinorNorm {
        #[arg(long)]
        q: String,
        /// The element as a row-major JSON array of rational strings.
        #[arg(long)]
        h: String,
    },
    /// Value of the quadratic character xi_(lambda,eps) on an element.
    CharacterEval {
        #[arg(long)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_negative_numbers = true)]
        eps: i8,
        /// The element as a row-major JSON array of rational strings.
        #[arg(long)]
        h: String,
        #[arg(long)]
        place: String,
    },
    /// Central-character and Fourier-support conditions for a pair of forms.
    Admissible {
        /// Left form (needed unless --quadruple is given).
        #[arg(long)]
        q: Option<String>,
        /// Right form (needed unless --quadruple is given).
        #[arg(long)]
        qp: Option<String>,
        /// Check at one place (constructs the character data when none is
        /// supplied explicitly).
        #[arg(long)]
        place: Option<String>,
        /// Check at every bad place plus the automorphy product.
        #[arg(long)]
        global: bool,
        /// Global quadruple JSON file (implies --global).
        #[arg(long)]
        quadruple: Option<PathBuf>,
        /// Explicit character parameter (with --eps/--epsp overrides the
        /// constructed data at a place).
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<i8>,
        #[arg(long, allow_negative_numbers = true)]
        epsp: Option<i8>,
        /// Symplectic rank of the comparison.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Global character JSON for --global without --quadruple.
        #[arg(long)]
        chi: Option<String>,
        #[arg(long)]
        chip: Option<String>,
    },
    /// Relation/Fourier/orbit report for one finite Weil model.
    WeilCheck {
        /// Odd prime p <= 7.
        #[arg(long)]
        p: u64,
        /// Diagonal unit entries, comma separated: 1,1,1.
        #[arg(long, value_delimiter = ',', required = true)]
        diag: Vec<u64>,
        /// Symplectic rank (1 or 2).
        #[arg(long)]
        n: usize,
        /// Override the sampling seed (else QUADRILIFT_SEED, else fixed).
        #[arg(long)]
        seed: Option<u64>,
        /// Random states per sampled check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Closed form of the unramified local pairing in t = q^{-s}.
    UnramifiedFactor {
        #[arg(long)]
        p: u64,
        /// Dimension of the left space (1 or 3).
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Dimension of the right space (1 or 3).
        #[arg(long, default_value_t = 1)]
        mp: usize,
        /// Discriminant of the left space (a unit at p).
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        disc: String,
        /// Discriminant of the right space (a unit at p).
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        discp: String,
        /// Symplectic rank (closed form known for n = 1).
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Truncated Euler product over primes outside an excluded set.
    Euler {
        /// Excluded primes, comma separated (may be empty).
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        exclude: Vec<String>,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        s: f64,
    },
    /// End-to-end comparison verdict for a global quadruple file.
    Verdict {
        /// JSON file with {"q":…,"chi":…,"qp":…,"chip":…,"n":…}.
        #[arg(long)]
        quadruple: PathBuf,
        /// Emit the full report instead of the two-field summary.
        #[arg(long)]
        full: bool,
    },
    /// Run the built-in verification suites.
    Selftest {
        /// Smaller grids and no p = 7 model.
        #[arg(long)]
        fast: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", serde_json::json!({ "error": err.to_string() }));
            ExitCode::from(1)
        }
    }
}

/// Print a compact single-line JSON value on stdout.
fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("reports serialize"));
}

fn ok() -> ExitCode {
    ExitCode::from(0)
}

/// Exit code for predicate outcomes: affirmative 0, negative 3.
fn gate(affirmative: bool) -> ExitCode {
    ExitCode::from(if affirmative { 0 } else { 3 })
}

fn parse_place(s: &str) -> Result<Place, quadrilift::Error> {
    Place::parse(s)
}

fn parse_space(s: &str) -> Result<QuadraticSpace, quadrilift::Error> {
    serde_json::from_str(s)
        .map_err(|e| quadrilift::Error::Parse(format!("form JSON: {e}")))
}

fn parse_flat(s: &str) -> Result<Vec<Rational>, quadrilift::Error> {
    let strings: Vec<String> = serde_json::from_str(s)
        .map_err(|e| quadrilift::Error::Parse(format!("matrix JSON: {e}")))?;
    strings.iter().map(|t| parse_rational(t)).collect()
}

fn parse_element(
    q: &QuadraticSpace,
    h: &str,
) -> Result<OrthogonalElement, quadrilift::Error> {
    let flat = parse_flat(h)?;
    OrthogonalElement::new(q.clone(), matrix_from_flat(&flat)?)
}

fn run(cmd: Cmd) -> Result<ExitCode, quadrilift::Error> {
    match cmd {
        Cmd::Hilbert { a, b, place } => {
            #[derive(Serialize)]
            struct Out {
                symbol: i8,
            }
            let symbol =
                hilbert(&parse_rational(&a)?, &parse_rational(&b)?, parse_place(&place)?)?;
            emit(&Out { symbol });
            Ok(ok())
        }
        Cmd::Invariants { q } => {
            // The full library report also carries the signature; the wire
            // format keeps the classifying triple only.
            #[derive(Serialize)]
            struct Out {
                dim: usize,
                disc: String,
                hasse: std::collections::BTreeMap<Place, i8>,
            }
            let report = invariants(&parse_space(&q)?)?;
            emit(&Out { dim: report.dim, disc: report.disc, hasse: report.hasse });
            Ok(ok())
        }
        Cmd::Isometric { q, qp, place } => {
            #[derive(Serialize)]
            struct Out {
                #[serde(skip_serializing_if = "Option::is_none")]
                place: Option<Place>,
                isometric: bool,
            }
            let (q, qp) = (parse_space(&q)?, parse_space(&qp)?);
            let (place, isometric) = match place {
                Some(p) => {
                    let nu = parse_place(&p)?;
                    (Some(nu), is_isometric_local(&q, &qp, nu)?)
                }
                None => (None, is_isometric_global(&q, &qp)?),
            };
            emit(&Out { place, isometric });
            Ok(gate(isometric))
        }
        Cmd::Isotropy { q, place } => {
            #[derive(Serialize)]
            struct Out {
                #[serde(skip_serializing_if = "Option::is_none")]
                place: Option<Place>,
                isotropic: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                note: Option<String>,
            }
            let q = parse_space(&q)?;
            let (place, isotropic) = match place {
                Some(p) => {
                    let nu = parse_place(&p)?;
                    (Some(nu), is_isotropic_local(&q, nu)?)
                }
                None => (None, is_isotropic_global(&q)?),
            };
            let note = (place.is_none() && q.dim() >= 5).then(|| {
                "dim >= 5: global anisotropy is equivalent to definiteness".to_string()
            });
            emit(&Out { place, isotropic, note });
            Ok(gate(isotropic))
        }
        Cmd::Represents { q, value, beta, place } => {
            #[derive(Serialize)]
            struct Out {
                place: Place,
                represents: bool,
            }
            let q = parse_space(&q)?;
            let nu = parse_place(&place)?;
            let represents = match (value, beta) {
                (Some(v), None) => represents_value_local(&q, &parse_rational(&v)?, nu)?,
                (None, Some(b)) => {
                    let m = SymMatrix::from_flat(&parse_flat(&b)?)?;
                    represents_gram_local(&q, &m, nu)?
                }
                _ => {
                    return Err(quadrilift::Error::Invalid(
                        "pass exactly one of --value or --beta".into(),
                    ))
                }
            };
            emit(&Out { place: nu, represents });
            Ok(gate(represents))
        }
        Cmd::SpinorNorm { q, h } => {
            #[derive(Serialize)]
            struct Out {
                spinor_norm: String,
                det: String,
                reflections: usize,
            }
            let q = parse_space(&q)?;
            let h = parse_element(&q, &h)?;
            let word = cartan_dieudonne(&h)?;
            let sn = spinor_norm(&h)?;
            emit(&Out {
                spinor_norm: format_rational(&Rational::from(square_free_part(&sn))),
                det: format_rational(&h.det()),
                reflections: word.len(),
            });
            Ok(ok())
        }
        Cmd::CharacterEval { q, lambda, eps, h, place } => {
            #[derive(Serialize)]
            struct Out {
                value: i8,
            }
            let q = parse_space(&q)?;
            let chi = QuadCharacter::new(parse_rational(&lambda)?, eps, q.dim())?;
            let h = parse_element(&q, &h)?;
            let value = xi_eval(&q, &chi, &h, parse_place(&place)?)?;
            emit(&Out { value });
            Ok(ok())
        }
        Cmd::Admissible {
            q,
            qp,
            place,
            global,
            quadruple,
            lambda,
            eps,
            epsp,
            n,
            chi,
            chip,
        } => {
            if global || quadruple.is_some() {
                let alpha: GlobalQuadruple = match quadruple {
                    Some(path) => {
                        let text = std::fs::read_to_string(&path).map_err(|e| {
                            quadrilift::Error::Parse(format!("{}: {e}", path.display()))
                        })?;
                        serde_json::from_str(&text).map_err(|e| {
                            quadrilift::Error::Parse(format!("quadruple JSON: {e}"))
                        })?
                    }
                    None => {
                        let (q, qp, chi, chip) = match (q, qp, chi, chip) {
                            (Some(q), Some(qp), Some(chi), Some(chip)) => (q, qp, chi, chip),
                            _ => {
                                return Err(quadrilift::Error::Invalid(
                                    "--global needs --quadruple or all of --q --qp --chi --chip"
                                        .into(),
                                ))
                            }
                        };
                        GlobalQuadruple {
                            q: parse_space(&q)?,
                            chi: serde_json::from_str(&chi).map_err(|e| {
                                quadrilift::Error::Parse(format!("chi JSON: {e}"))
                            })?,
                            qp: parse_space(&qp)?,
                            chip: serde_json::from_str(&chip).map_err(|e| {
                                quadrilift::Error::Parse(format!("chip JSON: {e}"))
                            })?,
                            n,
                        }
                    }
                };
                let report = globally_admissible(&alpha)?;
                let admissible = report.admissible;
                emit(&report);
                return Ok(gate(admissible));
            }
            let nu = parse_place(&place.ok_or_else(|| {
                quadrilift::Error::Invalid("pass --place for a local check or --global".into())
            })?)?;
            let (q, qp) = match (q, qp) {
                (Some(q), Some(qp)) => (parse_space(&q)?, parse_space(&qp)?),
                _ => {
                    return Err(quadrilift::Error::Invalid(
                        "local admissibility needs --q and --qp".into(),
                    ))
                }
            };
            let data = match (lambda, eps, epsp) {
                (Some(l), Some(e), Some(ep)) => quadrilift::admissibility::ConstructedData {
                    lambda: parse_rational(&l)?,
                    eps: e,
                    epsp: ep,
                },
                (None, None, None) => construct_characters(&q, &qp, nu)?,
                _ => {
                    return Err(quadrilift::Error::Invalid(
                        "pass all of --lambda --eps --epsp or none".into(),
                    ))
                }
            };
            let alpha = Quadruple::new(
                q.clone(),
                QuadCharacter::new(data.lambda.clone(), data.eps, q.dim())?,
                qp.clone(),
                QuadCharacter::new(data.lambda.clone(), data.epsp, qp.dim())?,
                n,
            )?;
            let report = locally_admissible(&alpha, nu)?;
            #[derive(Serialize)]
            struct Out {
                place: Place,
                lambda: String,
                eps: i8,
                epsp: i8,
                cc: bool,
                fc: bool,
                admissible: bool,
            }
            let admissible = report.verdict;
            emit(&Out {
                place: nu,
                lambda: format_rational(&data.lambda),
                eps: data.eps,
                epsp: data.epsp,
                cc: report.cc,
                fc: report.fc,
                admissible,
            });
            Ok(gate(admissible))
        }
        Cmd::WeilCheck { p, diag, n, seed, samples } => {
            if let Some(s) = seed {
                std::env::set_var("QUADRILIFT_SEED", s.to_string());
            }
            let model = FiniteWeilModel::new(p, &diag, n)?;
            let report = model_report(&model, samples)?;
            let passed = report.passed;
            emit(&report);
            Ok(gate(passed))
        }
        Cmd::UnramifiedFactor { p, m, mp, disc, discp, n } => {
            #[derive(Serialize)]
            struct Out {
                p: u64,
                m: usize,
                mp: usize,
                n: usize,
                factor: RationalFunctionInT,
            }
            let datum = UnramifiedDatum::new(
                p,
                m,
                mp,
                parse_rational(&disc)?,
                parse_rational(&discp)?,
            )?;
            let factor = unramified_pairing(&datum, n)?;
            emit(&Out { p, m, mp, n, factor });
            Ok(ok())
        }
        Cmd::Euler { exclude, bound, s } => {
            let mut set = BTreeSet::new();
            for token in exclude.iter().filter(|t| !t.is_empty()) {
                let p: u64 = token
                    .parse()
                    .map_err(|_| quadrilift::Error::Parse(format!("prime: {token}")))?;
                set.insert(p);
            }
            let estimate = partial_euler(&set, bound, s)?;
            emit(&estimate);
            Ok(ok())
        }
        Cmd::Verdict { quadruple, full } => {
            let text = std::fs::read_to_string(&quadruple).map_err(|e| {
                quadrilift::Error::Parse(format!("{}: {e}", quadruple.display()))
            })?;
            let alpha: GlobalQuadruple = serde_json::from_str(&text)
                .map_err(|e| quadrilift::Error::Parse(format!("quadruple JSON: {e}")))?;
            let report = verdict(&alpha)?;
            let outcome = report.verdict;
            if full {
                emit(&report);
            } else {
                #[derive(Serialize)]
                struct Out {
                    verdict: Verdict,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    pole_at: Option<String>,
                }
                let pole_at = report.pole_at_rho.then(|| format_rational(&report.rho));
                emit(&Out { verdict: outcome, pole_at });
            }
            Ok(gate(outcome == Verdict::Isomorphic))
        }
        Cmd::Selftest { fast } => {
            let report = run_selftest(fast)?;
            emit(&report);
            if !report.passed {
                eprintln!("failing suites: {}", report.failing().join(", "));
            }
            Ok(gate(report.passed))
        }
    }
}
