//! Command-line interface.
//!
//! Subcommands: `classgroup`, `heegner`, `theta`, `lvalue`, `waldspurger`,
//! `widemoment`, `diagmoment`, `equidist`. Exit codes: 0 success,
//! 1 precondition/domain error, 2 accuracy/integrity error, 64 usage.
//! Floating output carries 15 significant digits.

use crate::abelian;
use crate::experiments::{self, PeriodVector};
use crate::hecke::{FieldData, HeckeCharacter};
use crate::heegner;
use crate::lfun::RSLfunction;
use crate::modforms::{self, Eigenform};
use crate::qforms::{self, Discriminant};
use crate::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "cmwide", version, about = "class groups, Heegner periods, theta series and Rankin-Selberg central values for imaginary quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduced forms, class number and group structure of a discriminant
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
    },
    /// Orientations, base Heegner form and explicit class representatives
    Heegner {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value = "1")]
        level: i64,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
    },
    /// Theta series coefficients of a conductor-1 Hecke character
    Theta {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// ∞-type exponent k (even)
        #[arg(long = "infty-type", default_value = "0")]
        infty_type: i64,
        /// class-character twist index
        #[arg(long, default_value = "0")]
        chi: usize,
        #[arg(long, default_value = "100")]
        terms: usize,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutFormat,
    },
    /// Central Rankin–Selberg value L(π ⊗ χΩ, 1/2)
    Lvalue {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        /// eigenform weight (level-1 built-ins)
        #[arg(long, default_value = "12")]
        weight: i64,
        /// ∞-type exponent of Ω (defaults to the weight)
        #[arg(long = "infty-type")]
        infty_type: Option<i64>,
        #[arg(long, default_value = "0")]
        chi: usize,
        /// eigenform coefficient budget
        #[arg(long, default_value = "60000")]
        terms: usize,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutFormat,
    },
    /// Waldspurger ratio report: |P(χ)|²/L against the predicted constant
    Waldspurger {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value = "12")]
        weight: i64,
        #[arg(long, default_value = "60000")]
        terms: usize,
        #[arg(long, default_value = "1e-3")]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
    },
    /// Exact wide-moment assembly identity (lhs, rhs, delta)
    Widemoment {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value = "2")]
        n: usize,
        #[arg(long, default_value = "12")]
        weight: i64,
        #[arg(long, default_value = "1e-9")]
        tol: f64,
        #[arg(long, default_value = "20000")]
        terms: usize,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
    },
    /// Diagonal moment identity on computed period data
    Diagmoment {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value = "2")]
        n: usize,
        #[arg(long, default_value = "12")]
        weight: i64,
        #[arg(long, default_value = "1e-9")]
        tol: f64,
        #[arg(long, default_value = "20000")]
        terms: usize,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
    },
    /// Equidistribution scan over fundamental discriminants in [disc, disc-hi]
    Equidist {
        /// most negative discriminant of the scan
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long = "disc-hi", allow_hyphen_values = true, default_value = "-23")]
        disc_hi: i64,
        #[arg(long, default_value = "12")]
        weight: i64,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutFormat,
    },
}

/// Entry point; returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version as "errors" with successful exit
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 64;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Accuracy(_) | Error::Integrity(_) => 2,
                _ => 1,
            }
        }
    }
}

fn eigenform(weight: i64, terms: usize) -> Result<Eigenform> {
    modforms::level1_eigenform(weight, terms)
}

fn base_slot(
    field: &std::sync::Arc<FieldData>,
    f: &Eigenform,
) -> Result<(PeriodVector, HeckeCharacter)> {
    let omega = HeckeCharacter::base(field.clone(), f.weight())?;
    let (pv, _) = experiments::compute_periods(field, 1, f, &omega)?;
    Ok((pv, omega))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classgroup { disc, out } => {
            let cg = qforms::class_group(disc)?;
            let (group, _, _, _) = abelian::decompose(&cg)?;
            let forms: Vec<[i64; 3]> = cg
                .reduced_forms()
                .iter()
                .map(|f| [f.a(), f.b(), f.c()])
                .collect();
            match out {
                OutFormat::Json => println!(
                    "{}",
                    json!({
                        "disc": disc,
                        "h": cg.h(),
                        "forms": forms,
                        "elementary_divisors": group.divisors(),
                        "principal_index": cg.principal_index(),
                    })
                ),
                OutFormat::Csv => {
                    println!("a,b,c");
                    for f in &forms {
                        println!("{},{},{}", f[0], f[1], f[2]);
                    }
                }
            }
            Ok(())
        }
        Command::Heegner { disc, level, out } => {
            let d = Discriminant::new(disc)?;
            let cg = qforms::class_group(disc)?;
            let rs = heegner::orientations(d, level)?;
            let base = heegner::base_heegner_form(d, level, rs[0])?;
            let reps = heegner::explicit_representatives(&cg, &base)?;
            let (ok, failures) = heegner::lemma41_check(&cg, &reps)?;
            match out {
                OutFormat::Json => {
                    let entries: Vec<_> = reps
                        .entries
                        .iter()
                        .map(|e| {
                            let z = heegner::heegner_point(&e.heegner_form).z;
                            json!({
                                "p": e.p,
                                "b_lift": e.b_lift,
                                "form": [e.heegner_form.form.a(), e.heegner_form.form.b(), e.heegner_form.form.c()],
                                "class_index": e.class_index,
                                "point": [format!("{:.14e}", z.re), format!("{:.14e}", z.im)],
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "disc": disc,
                            "level": level,
                            "orientations": rs,
                            "base": [base.form.a(), base.form.b(), base.form.c()],
                            "entries": entries,
                            "ideal_identity_holds": ok,
                            "ideal_identity_failures": failures,
                        })
                    );
                }
                OutFormat::Csv => {
                    println!("p,b_lift,a,b,c,class_index");
                    for e in &reps.entries {
                        println!(
                            "{},{},{},{},{},{}",
                            e.p,
                            e.b_lift,
                            e.heegner_form.form.a(),
                            e.heegner_form.form.b(),
                            e.heegner_form.form.c(),
                            e.class_index
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Theta { disc, infty_type, chi, terms, out } => {
            let field = FieldData::new(disc)?;
            let omega = experiments::twisted_character(&field, infty_type, chi)?;
            let theta = crate::hecke::theta_coefficients(&omega, terms)?;
            match out {
                OutFormat::Csv => print!("{}", theta.to_csv()),
                OutFormat::Json => {
                    let lam: Vec<[f64; 2]> =
                        theta.lambda.iter().map(|l| [l.re, l.im]).collect();
                    println!(
                        "{}",
                        json!({
                            "disc": disc,
                            "infty_type": infty_type,
                            "weight": theta.weight,
                            "level": theta.level,
                            "cuspidal": theta.cuspidal,
                            "lambda": lam,
                        })
                    );
                }
            }
            Ok(())
        }
        Command::Lvalue { disc, weight, infty_type, chi, terms, out } => {
            let field = FieldData::new(disc)?;
            let f = eigenform(weight, terms)?;
            let k = infty_type.unwrap_or(weight);
            let omega = experiments::twisted_character(&field, k, chi)?;
            let mut l = RSLfunction::new(&f, &omega, 4096)?;
            let cv = l.afe_central_value()?;
            match out {
                OutFormat::Csv => {
                    println!("disc,chi,k,value,error,terms_used");
                    println!(
                        "{},{},{},{:.14e},{:.14e},{}",
                        disc, chi, k, cv.value, cv.error_estimate, cv.terms_used
                    );
                }
                OutFormat::Json => println!(
                    "{}",
                    json!({
                        "disc": disc,
                        "chi": chi,
                        "k": k,
                        "value": cv.value,
                        "error": cv.error_estimate,
                        "terms_used": cv.terms_used,
                    })
                ),
            }
            Ok(())
        }
        Command::Waldspurger { disc, weight, terms, tol, out } => {
            let field = FieldData::new(disc)?;
            let f = eigenform(weight, terms)?;
            let omega = HeckeCharacter::base(field.clone(), weight)?;
            let report = experiments::waldspurger_check(&field, &f, &omega, 4096)?;
            match out {
                OutFormat::Json => {
                    let rows: Vec<_> = report
                        .rows
                        .iter()
                        .map(|r| {
                            json!({
                                "chi": r.chi_index,
                                "period_sq": r.period_sq,
                                "l_value": r.l_value,
                                "l_error": r.l_error,
                                "ratio": r.ratio,
                                "inconsistent": r.inconsistent,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "disc": report.disc,
                            "weight": report.weight,
                            "rows": rows,
                            "dispersion": report.dispersion,
                            "ratio_mean": report.ratio_mean,
                            "measured_c_infinity": report.measured_c_infinity,
                            "predicted_variant_a": report.predicted_variant_a,
                            "predicted_variant_b": report.predicted_variant_b,
                            "sym_square": report.sym_square,
                        })
                    );
                }
                OutFormat::Csv => {
                    println!("chi,period_sq,l_value,l_error,ratio,inconsistent");
                    for r in &report.rows {
                        println!(
                            "{},{:.14e},{:.14e},{:.14e},{:.14e},{}",
                            r.chi_index, r.period_sq, r.l_value, r.l_error, r.ratio, r.inconsistent
                        );
                    }
                }
            }
            if report.dispersion > tol {
                return Err(Error::Integrity(format!(
                    "ratio dispersion {:.3e} exceeds tolerance {tol:.3e}",
                    report.dispersion
                )));
            }
            Ok(())
        }
        Command::Widemoment { disc, n, weight, tol, terms, out } => {
            let field = FieldData::new(disc)?;
            let f = eigenform(weight, terms)?;
            let (pv, omega) = base_slot(&field, &f)?;
            let (slots, omegas) = match n {
                1 => (vec![pv.product(&pv.conj())?], vec![omega.mul(&omega.conj())?]),
                2 => (vec![pv.clone(), pv.conj()], vec![omega.clone(), omega.conj()]),
                3 => {
                    let sq = pv.product(&pv)?;
                    (
                        vec![pv.clone(), pv.clone(), sq.conj()],
                        vec![omega.clone(), omega.clone(), omega.mul(&omega)?.conj()],
                    )
                }
                _ => {
                    return Err(Error::Domain("widemoment supports n ∈ {1, 2, 3}".into()));
                }
            };
            if !experiments::verify_trivial_product(&omegas)? {
                return Err(Error::Precondition("character product is not trivial".into()));
            }
            let (lhs, rhs, _) = experiments::wide_moment_assembly(&slots)?;
            let delta = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300);
            emit_identity_row(out, disc, n, lhs, rhs, delta);
            if delta > tol {
                return Err(Error::Integrity(format!(
                    "assembly identity off by {delta:.3e} (tol {tol:.3e})"
                )));
            }
            Ok(())
        }
        Command::Diagmoment { disc, n, weight, tol, terms, out } => {
            let field = FieldData::new(disc)?;
            let f = eigenform(weight, terms)?;
            let (pv, _) = base_slot(&field, &f)?;
            let slots = vec![pv; n.max(1)];
            let (lhs, rhs, _) = experiments::diagonal_moment_check(&slots)?;
            let delta = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300);
            emit_identity_row(out, disc, n, lhs, rhs, delta);
            if delta > tol && (lhs.norm() > 1e-20 || rhs.norm() > 1e-20) {
                return Err(Error::Integrity(format!(
                    "diagonal identity off by {delta:.3e} (tol {tol:.3e})"
                )));
            }
            Ok(())
        }
        Command::Equidist { disc, disc_hi, weight, out } => {
            let f = eigenform(weight, 4000)?;
            let rows = experiments::equidistribution_scan(&f, disc, disc_hi)?;
            match out {
                OutFormat::Csv => {
                    println!("disc,h,mean_mass,deviation,weyl");
                    for r in &rows {
                        println!(
                            "{},{},{:.14e},{:.14e},{:.14e}",
                            r.disc, r.h, r.mean_mass, r.deviation, r.weyl
                        );
                    }
                }
                OutFormat::Json => {
                    let items: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "disc": r.disc,
                                "h": r.h,
                                "mean_mass": r.mean_mass,
                                "deviation": r.deviation,
                                "weyl": r.weyl,
                            })
                        })
                        .collect();
                    let near = experiments::block_medians(&rows, 23, 1000);
                    let far = experiments::block_medians(&rows, 10_000, 40_000);
                    println!(
                        "{}",
                        json!({
                            "rows": items,
                            "block_median_near": near.map(|(a, b)| json!({"deviation": a, "weyl": b})),
                            "block_median_far": far.map(|(a, b)| json!({"deviation": a, "weyl": b})),
                        })
                    );
                }
            }
            Ok(())
        }
    }
}

fn emit_identity_row(
    out: OutFormat,
    disc: i64,
    n: usize,
    lhs: crate::Complex64,
    rhs: crate::Complex64,
    delta: f64,
) {
    match out {
        OutFormat::Json => println!(
            "{}",
            json!({
                "disc": disc,
                "n": n,
                "lhs": [lhs.re, lhs.im],
                "rhs": [rhs.re, rhs.im],
                "delta": delta,
            })
        ),
        OutFormat::Csv => {
            println!("disc,n,lhs_re,lhs_im,rhs_re,rhs_im,delta");
            println!(
                "{},{},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e}",
                disc, n, lhs.re, lhs.im, rhs.re, rhs.im, delta
            );
        }
    }
}
