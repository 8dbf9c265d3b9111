//! `tateq` — batch verification and desk-calculator front end for the
//! series engine: run identity/congruence checks, print named series,
//! expand punctured-line expressions, apply the boundary map, and evaluate
//! the numeric layer. Exit codes: 0 success (expected failures allowed),
//! 1 at least one check failed, 2 bad input.

mod expr;
mod suite;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tateq::punctured::{chart_c, chart_h};
use tateq::tate::{self, TateElement};
use tateq::{polylog, special, Puncture, TruncatedSeries, Var};

use crate::expr::parse_expr;
use crate::suite::{run_check, run_suite, RunConfig, CHECK_NAMES};

#[derive(Parser)]
#[command(
    name = "tateq",
    version,
    about = "Exact series identities, punctured-line expansions, and the numeric layer behind them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one named check, a prime-parametrized family, or `all`.
    Verify {
        /// Check name from the registry, or "all".
        #[arg(default_value = "all")]
        check: String,
        /// Truncation order for the series checks.
        #[arg(long, default_value_t = 64)]
        order: i64,
        /// Prime for the bare family names (artin-hasse, frobenius-lift,
        /// fx-conjugation).
        #[arg(long, default_value_t = 2)]
        prime: u64,
        /// Numeric sample tolerance (exact checks ignore it; a few checks
        /// pin their own documented tolerance).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Deliberately corrupt one wu-lemma coefficient so the harness
        /// can demonstrate a failure with a witness.
        #[arg(long)]
        perturb: bool,
    },
    /// Print a named series as exact JSON (coefficients are strings).
    Series {
        /// One of: w, x-of-w, fx, wu-unit, wu-unit-positive, logistic,
        /// li0, todd, a-hat, a-hat-2x.
        name: String,
        #[arg(long, default_value_t = 64)]
        order: i64,
        /// Prime for w, x-of-w, fx.
        #[arg(long, default_value_t = 2)]
        prime: u64,
    },
    /// Expand an expression in Z[x, 1/x, 1/(1-x)] at a puncture or in a
    /// chart variable.
    Expand {
        /// Expression over + - * / ^ with integer constants and x; a
        /// leading minus is part of the expression, not a flag.
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// Expansion point: 0, 1, inf, or the chart variables c (via
        /// x = 1 - e^-c) and h (via x = e^-h).
        #[arg(long, default_value = "0")]
        at: String,
        #[arg(long, default_value_t = 64)]
        order: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Boundary map: print row k of the opening table, or the image of a
    /// Laurent expression in q.
    Boundary {
        /// Row index: coefficients of the image of q^-k.
        #[arg(long)]
        k: Option<usize>,
        /// Element of Z[q, 1/q, 1/(1-q)] to push through the boundary map.
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        #[arg(long, default_value_t = 64)]
        order: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Divided moment of the Bose density: zeta(s) for s > 1, a divergence
    /// diagnostic for s <= 1.
    Moments {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Reduced spectral density 2*eps^3/(e^eps - 1) at a frequency.
    Planck {
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Riemann zeta at a real argument.
    Zeta {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// {value, est_error, method}: the shape every scalar numeric answer uses.
#[derive(Serialize)]
struct ScalarResult {
    value: f64,
    est_error: f64,
    method: &'static str,
}

fn die(message: impl std::fmt::Display) -> ! {
    eprintln!("error: {message}");
    std::process::exit(2);
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serialization"));
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            check,
            order,
            prime,
            tol,
            format,
            perturb,
        } => {
            if order < 1 {
                die("--order must be at least 1");
            }
            if !is_prime(prime) {
                die(format!("--prime {prime} is not prime"));
            }
            if !(tol > 0.0) {
                die("--tol must be positive");
            }
            let cfg = RunConfig {
                order,
                prime,
                tol,
                perturb,
            };
            let report = if check == "all" {
                run_suite(&CHECK_NAMES, &cfg)
            } else if run_check(&check, &cfg).is_some() {
                run_suite(&[check.as_str()], &cfg)
            } else {
                eprintln!("error: unknown check {check:?}");
                eprintln!("available: all, {}", CHECK_NAMES.join(", "));
                eprintln!("families taking --prime: artin-hasse, frobenius-lift, fx-conjugation");
                std::process::exit(2);
            };
            match format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => print_json(&report),
            }
            std::process::exit(report.exit_code());
        }

        Command::Series { name, order, prime } => {
            if order < 1 {
                die("--order must be at least 1");
            }
            if !is_prime(prime) {
                die(format!("--prime {prime} is not prime"));
            }
            let series = named_series(&name, order, prime)
                .unwrap_or_else(|| die(format!(
                    "unknown series {name:?}; available: w, x-of-w, fx, wu-unit, wu-unit-positive, logistic, li0, todd, a-hat, a-hat-2x"
                )));
            print_json(&series);
        }

        Command::Expand {
            expr,
            at,
            order,
            format,
        } => {
            if order < 0 {
                die("--order must be nonnegative");
            }
            let f = parse_expr(&expr, 'x').unwrap_or_else(|e| die(e));
            let series = match at.as_str() {
                "0" => f.expand_at(Puncture::Zero, order),
                "1" => f.expand_at(Puncture::One, order),
                "inf" => f.expand_at(Puncture::Infinity, order),
                "c" => chart_c(&f, order).unwrap_or_else(|e| die(e)),
                "h" => chart_h(&f, order).unwrap_or_else(|e| die(e)),
                other => die(format!("--at must be one of 0, 1, inf, c, h; got {other:?}")),
            };
            match format {
                Format::Text => println!("{series}"),
                Format::Json => print_json(&series),
            }
        }

        Command::Boundary {
            k,
            expr,
            order,
            format,
        } => match (k, expr) {
            (Some(k), None) => {
                if k == 0 {
                    die("--k must be at least 1 (q^0 is regular and maps to zero)");
                }
                let row: Vec<String> = tate::q_coefficients(k).iter().map(|c| c.to_string()).collect();
                match format {
                    Format::Text => println!("Q[{k}] = [{}]", row.join(", ")),
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Row {
                            k: usize,
                            #[serde(rename = "Q")]
                            q: Vec<String>,
                        }
                        print_json(&Row { k, q: row });
                    }
                }
            }
            (None, Some(src)) => {
                if order < 0 {
                    die("--order must be nonnegative");
                }
                let f = parse_expr(&src, 'q').unwrap_or_else(|e| die(e));
                let q_series = TateElement::new(f).as_function().expand_at(Puncture::Zero, order).with_var(Var::Q);
                let image = tate::boundary(&q_series).unwrap_or_else(|e| die(e));
                let coeffs: Vec<String> = image.coefficients().iter().map(|c| c.to_string()).collect();
                match format {
                    Format::Text => println!("{image}"),
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Image {
                            expr: String,
                            image: Vec<String>,
                            display: String,
                        }
                        print_json(&Image {
                            expr: src,
                            image: coeffs,
                            display: image.to_string(),
                        });
                    }
                }
            }
            _ => die("pass exactly one of --k or --expr"),
        },

        Command::Moments { s, tol, format } => {
            if !(tol > 0.0) {
                die("--tol must be positive");
            }
            let result = polylog::divided_moment(s, tol).unwrap_or_else(|e| die(e));
            match format {
                Format::Text => match result.status {
                    polylog::MomentStatus::Converged => println!(
                        "moment({s}) = {:.15} (est err {:.2e}, {:?})",
                        result.value, result.est_error, result.method
                    ),
                    polylog::MomentStatus::Divergent => {
                        let d = result.diagnostic.as_ref().expect("divergent diagnostic");
                        println!(
                            "moment({s}) diverges: cutoff scan fits a {} model, slope {:.4} (expected {:.4})",
                            d.model, d.slope, d.expected_slope
                        );
                    }
                },
                Format::Json => print_json(&result),
            }
        }

        Command::Planck { eps, format } => {
            if !(eps > 0.0) {
                die("--eps must be positive");
            }
            let value = polylog::planck_reduced(eps);
            let result = ScalarResult {
                value,
                est_error: 4.0 * f64::EPSILON * value.abs(),
                method: "closed-form",
            };
            match format {
                Format::Text => println!("planck({eps}) = {:.15}", result.value),
                Format::Json => print_json(&result),
            }
        }

        Command::Zeta { s, format } => {
            let value = polylog::zeta(s).unwrap_or_else(|e| die(e));
            let result = ScalarResult {
                value,
                est_error: 1e-12 * (1.0 + value.abs()),
                method: if s >= -1.0 { "euler-maclaurin" } else { "reflection" },
            };
            match format {
                Format::Text => println!("zeta({s}) = {:.15}", result.value),
                Format::Json => print_json(&result),
            }
        }
    }
}

fn named_series(name: &str, order: i64, prime: u64) -> Option<TruncatedSeries> {
    Some(match name {
        "w" => special::w_series(prime, order),
        "x-of-w" => special::x_of_w(prime, order),
        "fx" => special::fx_series(prime, order),
        "wu-unit" => special::wu_unit(order),
        "wu-unit-positive" => special::wu_unit_positive(order),
        "logistic" => special::logistic(order),
        "li0" => special::li0_series(order),
        "todd" => special::todd_series(order),
        "a-hat" => special::a_hat(order),
        "a-hat-2x" => special::a_hat_2x(order),
        _ => return None,
    })
}
