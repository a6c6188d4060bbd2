//! Command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complex::EquivariantComplex;
use crate::demo;
use crate::error::{NovikovError, Result};
use crate::groupring::CoefficientRing;
use crate::homology::{
    main_theorem_check, novikov_betti, polytope_betti, rational_approximation, rational_approximation_in_cover,
    stabilized_oracle, truncated_homology_oracle,
};
use crate::lattice::{
    check_dim, parse_rational, parse_rational_list, quotient_map, CohomologyClass, Polytope, Subpolytope,
};
use crate::morse::{morse_reduce, MatchingStrategy};
use crate::rank::RankOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "novikov", version, about = "Novikov homology of finite equivariant complexes")]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Override the coefficient ring of the input (Z, Q or Z2).
    #[arg(long, global = true)]
    pub coefficients: Option<String>,
    /// Seed for randomized rank evaluation and matchings.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the boundary squares to zero.
    Validate { file: PathBuf },
    /// Ordinary Betti numbers (the zero class).
    Betti { file: PathBuf },
    /// Novikov Betti numbers of one class, cross-checked by the series oracle.
    Novikov {
        file: PathBuf,
        /// Periods, e.g. "1,0" or "1/2,3".
        #[arg(long)]
        class: String,
        /// Run the oracle at this order instead of doubling until stable.
        #[arg(long)]
        order: Option<String>,
    },
    /// Betti numbers over the restricted polytope Novikov ring.
    Polytope {
        file: PathBuf,
        /// Vertices separated by ';', periods by ','.
        #[arg(long)]
        vertices: String,
        /// Vertex indices of the subpolytope (default: all).
        #[arg(long)]
        restrict: Option<String>,
    },
    /// Compare the constructions from two classes of a polytope.
    MainCheck {
        file: PathBuf,
        #[arg(long)]
        vertices: String,
        /// Convex weights of the first class.
        #[arg(long)]
        a: String,
        /// Convex weights of the second class.
        #[arg(long)]
        b: String,
        #[arg(long)]
        restrict: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed_a: u64,
        #[arg(long, default_value_t = 2)]
        seed_b: u64,
    },
    /// Acyclic matching, reduction and Betti invariance.
    Morse {
        file: PathBuf,
        #[arg(long, default_value = "greedy")]
        strategy: String,
        /// Classes to compare (repeatable); the zero class is always included.
        #[arg(long)]
        class: Vec<String>,
    },
    /// Rational approximation family of a class.
    Approx {
        #[arg(long)]
        class: String,
        #[arg(long)]
        eps: String,
        /// Classes whose common kernel defines the cover (default: the class).
        #[arg(long)]
        cover: Option<String>,
    },
    /// Run every corpus check.
    Demo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Report {
    Ok(Value, String),
    /// A check that ran but did not pass (exit code 1).
    Failed(Value, String),
}

fn load(config: &RunConfig, file: &PathBuf) -> Result<EquivariantComplex> {
    let x = EquivariantComplex::load(file)?;
    match &config.coefficients {
        Some(tag) => x.with_ring(CoefficientRing::parse(tag)?),
        None => Ok(x),
    }
}

fn indices(s: &Option<String>, p: &Polytope) -> Result<Subpolytope> {
    match s {
        None => Ok(Subpolytope::full(p)),
        Some(s) => {
            let idx = s
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| NovikovError::Parse(format!("bad vertex index {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Subpolytope::new(p.clone(), idx)
        }
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn execute(config: &RunConfig) -> Result<Report> {
    let opts = RankOptions { seed: config.seed, ..RankOptions::default() };
    match &config.command {
        Command::Validate { file } => {
            let x = load(config, file)?;
            let counts: Vec<usize> = (0..x.cells().len()).map(|k| x.cell_count(k)).collect();
            let text = format!("valid: cells per degree ({}), chi = {}\n", join(&counts), x.euler_characteristic());
            Ok(Report::Ok(json!({"valid": true, "cells": counts, "chi": x.euler_characteristic()}), text))
        }
        Command::Betti { file } => {
            let x = load(config, file)?;
            let r = novikov_betti(&x, &CohomologyClass::zero(x.rank()), &opts)?;
            let text = format!("betti ({}), chi = {}\n", join(&r.betti), r.chi);
            Ok(Report::Ok(r.to_json(), text))
        }
        Command::Novikov { file, class, order } => {
            let x = load(config, file)?;
            let a = CohomologyClass::parse(class)?;
            check_dim(x.rank(), a.rank())?;
            let mut r = novikov_betti(&x, &a, &opts)?;
            let rank_one = quotient_map(std::slice::from_ref(&a))?.target_rank() == 1;
            let mut oracle = Value::Null;
            if rank_one {
                let (betti, used) = match order {
                    Some(n) => {
                        let run = truncated_homology_oracle(&x, &a, &parse_rational(n)?)?;
                        (run.betti, run.order)
                    }
                    None => {
                        let s = stabilized_oracle(&x, &a, 1024)?;
                        (s.betti, s.order.to_string())
                    }
                };
                r.checks.insert("oracle".into(), betti == r.betti);
                oracle = json!({"betti": betti, "order": used});
            }
            let mut doc = r.to_json();
            doc["oracle"] = oracle.clone();
            let mut text =
                format!("class {a}: betti ({}), chi = {}, method {}\n", join(&r.betti), r.chi, r.method.tag());
            if let Some(b) = oracle.get("betti") {
                let _ = writeln!(text, "series oracle at order {}: {b}", oracle["order"].as_str().unwrap_or(""));
            }
            Ok(if r.passed() { Report::Ok(doc, text) } else { Report::Failed(doc, text) })
        }
        Command::Polytope { file, vertices, restrict } => {
            let x = load(config, file)?;
            let p = Polytope::parse(vertices)?;
            let b = indices(restrict, &p)?;
            let r = polytope_betti(&x, &p, &b, &opts)?;
            let text = format!(
                "polytope with {} vertices, restricted to {:?}: betti ({}), chi = {}\n",
                p.len(),
                b.indices(),
                join(&r.betti),
                r.chi
            );
            Ok(if r.passed() { Report::Ok(r.to_json(), text) } else { Report::Failed(r.to_json(), text) })
        }
        Command::MainCheck { file, vertices, a, b, restrict, seed_a, seed_b } => {
            let x = load(config, file)?;
            let p = Polytope::parse(vertices)?;
            let sub = indices(restrict, &p)?;
            let r = main_theorem_check(
                &x,
                &p,
                &parse_rational_list(a)?,
                &parse_rational_list(b)?,
                &sub,
                (*seed_a, *seed_b),
                &opts,
            )?;
            let text = format!(
                "a = ({}), b = ({}): full ({}), restricted ({}), square commutes: {}, {}\n",
                join(&r.a),
                join(&r.b),
                join(&r.full_from_a.betti),
                join(&r.restricted_from_a.betti),
                r.square_commutes,
                if r.passed { "passed" } else { "FAILED" }
            );
            Ok(if r.passed { Report::Ok(r.to_json(), text) } else { Report::Failed(r.to_json(), text) })
        }
        Command::Morse { file, strategy, class } => {
            let x = load(config, file)?;
            let reduction = morse_reduce(&x, config.seed, MatchingStrategy::parse(strategy)?)?;
            let mut classes = vec![CohomologyClass::zero(x.rank())];
            for c in class {
                let c = CohomologyClass::parse(c)?;
                check_dim(x.rank(), c.rank())?;
                classes.push(c);
            }
            let mut all = true;
            let mut comparisons = Vec::new();
            let mut text = format!(
                "{} matched pairs, critical cells per degree ({})\n",
                reduction.matching.len(),
                join(
                    &(0..reduction.complex.cells().len()).map(|k| reduction.complex.cell_count(k)).collect::<Vec<_>>()
                )
            );
            for a in &classes {
                let before = novikov_betti(&x, a, &opts)?.betti;
                let after = novikov_betti(&reduction.complex, a, &opts)?.betti;
                all &= before == after;
                let _ = writeln!(text, "class {a}: cellular ({}), reduced ({})", join(&before), join(&after));
                comparisons.push(json!({"class": a.to_strings(), "cellular": before, "reduced": after}));
            }
            let doc = json!({
                "matching": reduction.matching.to_json(&x),
                "complex": reduction.complex.to_json(),
                "comparisons": comparisons,
                "invariant": all,
            });
            Ok(if all { Report::Ok(doc, text) } else { Report::Failed(doc, text) })
        }
        Command::Approx { class, eps, cover } => {
            let u = CohomologyClass::parse(class)?;
            let eps = parse_rational(eps)?;
            let f = match cover {
                None => rational_approximation(&u, &eps, u.rank())?,
                Some(c) => {
                    let classes = Polytope::parse(c)?;
                    rational_approximation_in_cover(&u, &eps, classes.vertices())?
                }
            };
            let mut text = String::new();
            for c in &f.classes {
                let _ = writeln!(text, "{c}");
            }
            let _ = writeln!(
                text,
                "distinct: {}, within eps: {}, kernel containing: {}, spanning: {}",
                f.flags.distinct, f.flags.within_eps, f.flags.kernel_containing, f.flags.spanning
            );
            let doc = f.to_json();
            Ok(if f.flags.all() { Report::Ok(doc, text) } else { Report::Failed(doc, text) })
        }
        Command::Demo => {
            let (outcomes, _) = demo::run_timed();
            let mut text = String::new();
            for o in &outcomes {
                let _ = writeln!(
                    text,
                    "[{}] {:>2} {}: {}",
                    if o.passed { "pass" } else { "FAIL" },
                    o.id,
                    o.title,
                    o.detail
                );
            }
            let all = outcomes.iter().all(|o| o.passed);
            let doc = json!({"criteria": outcomes, "passed": all});
            Ok(if all { Report::Ok(doc, text) } else { Report::Failed(doc, text) })
        }
    }
}

fn error_json(e: &NovikovError) -> Value {
    let mut doc = json!({"error": e.kind(), "message": e.to_string()});
    if let NovikovError::Validation { degree, row, col, entry } = e {
        doc["degree"] = json!(degree);
        doc["row"] = json!(row);
        doc["col"] = json!(col);
        doc["entry"] = json!(entry);
    }
    doc
}

fn render(config: &RunConfig, doc: &Value, text: String) -> String {
    match config.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(doc).expect("report serializes")),
        Format::Text => text,
    }
}

/// Runs one command; exit code 0 on success, 1 when a check fails
/// (including `∂² ≠ 0`), 2 on bad input.
pub fn run(config: &RunConfig) -> Outcome {
    match execute(config) {
        Ok(Report::Ok(doc, text)) => Outcome { code: 0, stdout: render(config, &doc, text), stderr: String::new() },
        Ok(Report::Failed(doc, text)) => Outcome { code: 1, stdout: render(config, &doc, text), stderr: String::new() },
        Err(e) => {
            let code = if matches!(e, NovikovError::Validation { .. }) { 1 } else { 2 };
            Outcome { code, stdout: String::new(), stderr: format!("{}\n", error_json(&e)) }
        }
    }
}
