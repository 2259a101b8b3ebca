use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use smallhouse_core::combinatorics::{
    graph_property_holds, hadamard_bound, mod_p2_property_holds, modp2_pair,
    singleton_difference_holds, DifferenceProfile,
};
use smallhouse_core::exhaust::{run_job, ExhaustJob};
use smallhouse_core::measures::{
    cassels_form, cassels_height, castle_enclosure, equivalence_hash, minimal_level,
    minimal_weight, FamilyMatch, WeightResult,
};
use smallhouse_core::splitting::{splitting_profile, uk_box};
use smallhouse_core::tables::{
    self, verify_difference_lemmas, verify_family_levels, verify_splitting, verify_table1,
    verify_table2, verify_table3, TableReport,
};
use smallhouse_core::{parse_sparse, CyclotomicInt};

#[derive(Parser)]
#[command(name = "smallhouse", version, about = "Cyclotomic integers of small house")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Element {
    /// Level N of the element.
    #[arg(long)]
    level: u32,
    /// Sparse element, e.g. `0:1,1:1,3:1` for 1 + z + z^3.
    #[arg(long, allow_hyphen_values = true)]
    elt: String,
}

impl Element {
    fn build(&self) -> Result<CyclotomicInt> {
        let terms = parse_sparse(&self.elt)?;
        Ok(CyclotomicInt::from_sparse_big(self.level, &terms)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    Singleton,
    Modp2,
    Graph,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum TableName {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Families,
    Splitting,
    Lemmas,
}

#[derive(Subcommand)]
enum Command {
    /// Cassels height: the mean of |b|^2 over the conjugates b.
    Height(Element),
    /// Certified enclosure of the castle (the squared house).
    Castle {
        #[command(flatten)]
        element: Element,
        /// Enclosure width is at most 2^-bits.
        #[arg(long, default_value_t = 60)]
        bits: u32,
    },
    /// Minimal level and a root of unity moving the element there.
    Minlevel(Element),
    /// Canonical polynomial of the equivalence class.
    Hash(Element),
    /// Least number of roots of unity summing to the element.
    Weight {
        #[command(flatten)]
        element: Element,
        #[arg(long, default_value_t = 6)]
        max_weight: u32,
    },
    /// Membership in the three Cassels families.
    CasselsTest(Element),
    /// Certified search over short sums of roots of unity.
    Exhaust {
        /// Level and weight bound, `N,n`.
        #[arg(long, conflicts_with = "preset")]
        pair: Option<String>,
        #[arg(long)]
        preset: Option<String>,
        /// Allow presets that take far longer than a test run.
        #[arg(long)]
        extended: bool,
        #[arg(long, default_value_t = 5.1)]
        float_threshold: f64,
        #[arg(long, default_value = "501/100")]
        exact_threshold: String,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write JSON Lines records to this file.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Difference-set lemma check for one (p, X).
    Diffset {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: usize,
        /// Include the failing subset and its difference profile.
        #[arg(long)]
        witness: bool,
    },
    /// Splitting of a prime in Q(zeta_N).
    Splitting {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        castle_exponent: Option<u64>,
        #[arg(long)]
        self_conjugate: bool,
    },
    /// Re-verify the embedded reference tables.
    VerifyTables {
        #[arg(long, value_enum)]
        table: Option<TableName>,
        /// Largest N for the family level check.
        #[arg(long, default_value_t = 200)]
        bound: u32,
    },
}

fn emit(json_mode: bool, v: &Value) {
    if json_mode {
        println!("{v}");
        return;
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::String(s) => println!("{k}: {s}"),
                    other => println!("{k}: {other}"),
                }
            }
        }
        other => println!("{other}"),
    }
}

fn family_json(m: &Option<FamilyMatch>) -> Value {
    match m {
        None => Value::Null,
        Some(FamilyMatch::SumOfTwo) => json!({"form": 1, "description": "sum of at most two roots of unity"}),
        Some(FamilyMatch::OnePlusZetaMinusInverse(z)) => {
            json!({"form": 2, "description": format!("1 + z - 1/z with z = {z}")})
        }
        Some(FamilyMatch::GoldenPair(z)) => json!({
            "form": 3,
            "description": format!("(z5 + z5^4) + (z5^2 + z5^3) z with z = {z}")
        }),
    }
}

fn print_report(json_mode: bool, r: &TableReport) {
    if json_mode {
        println!("{}", serde_json::to_string(r).expect("serialize"));
    } else {
        println!("{r}");
    }
}

fn run(cli: Cli) -> Result<bool> {
    let js = cli.json;
    match cli.command {
        Command::Height(e) => {
            let a = e.build()?;
            emit(js, &json!({"element": a.sparse_string(), "level": a.level(),
                             "height": cassels_height(&a).to_string()}));
        }
        Command::Castle { element, bits } => {
            let a = element.build()?;
            let width = BigRational::new(BigInt::from(1), BigInt::from(1) << bits);
            let enc = castle_enclosure(&a, &width);
            emit(js, &json!({"element": a.sparse_string(), "approx": enc.mid_f64(),
                             "enclosure": enc}));
        }
        Command::Minlevel(e) => {
            let a = e.build()?;
            let m = minimal_level(&a);
            emit(js, &json!({"level": m.level, "witness": m.witness.to_string(),
                             "element": m.element.sparse_string()}));
        }
        Command::Hash(e) => {
            let k = equivalence_hash(&e.build()?);
            emit(js, &json!({"degree": k.degree, "coefficients": k.to_json(),
                             "polynomial": k.to_string()}));
        }
        Command::Weight { element, max_weight } => {
            let a = element.build()?;
            let v = match minimal_weight(&a, Some(max_weight)) {
                WeightResult::Found { weight, witness } => json!({
                    "weight": weight,
                    "witness": witness.iter().map(|r| r.to_string()).collect::<Vec<_>>()
                }),
                WeightResult::Exceeded { bound } => json!({"weight": null, "exceeds": bound}),
            };
            emit(js, &v);
        }
        Command::CasselsTest(e) => {
            let m = cassels_form(&e.build()?);
            emit(js, &json!({"cassels_form": m.is_some(), "family": family_json(&m)}));
        }
        Command::Exhaust {
            pair,
            preset,
            extended,
            float_threshold,
            exact_threshold,
            jobs,
            out,
        } => {
            let mut job = match (pair, preset) {
                (Some(p), None) => {
                    let (n, w) = p
                        .split_once(',')
                        .ok_or_else(|| anyhow!("--pair expects N,n"))?;
                    ExhaustJob::new(n.trim().parse()?, w.trim().parse()?)
                }
                (None, Some(name)) => {
                    let (job, is_extended) = ExhaustJob::preset(&name).ok_or_else(|| {
                        let names: Vec<_> = tables::fixtures()
                            .exhaust_presets
                            .iter()
                            .map(|p| p.name.as_str())
                            .collect();
                        anyhow!("unknown preset {name}; known: {}", names.join(", "))
                    })?;
                    if is_extended && !extended {
                        bail!("preset {name} is a long run; pass --extended to start it");
                    }
                    job
                }
                _ => bail!("give exactly one of --pair or --preset"),
            };
            job.float_threshold = float_threshold;
            job.exact_threshold = tables::parse_rational(&exact_threshold)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()?;
            let report = pool.install(|| run_job(&job))?;
            if let Some(path) = out {
                std::fs::write(&path, report.to_jsonl())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            eprintln!("wall time {:.2}s", report.wall_time_secs);
            if js {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                println!(
                    "N = {}, n = {}: {} tuples, {} survivors in {} classes",
                    report.level,
                    report.weight,
                    report.tuples_enumerated,
                    report.survivors,
                    report.classes
                );
                for (k, v) in &report.counts {
                    println!("  {k}: {v}");
                }
            }
            return Ok(report.new_count() == 0);
        }
        Command::Diffset { lemma, p, x, witness } => {
            if !smallhouse_core::arith::is_prime(p) {
                bail!("{p} is not prime");
            }
            if x as u64 > p || x == 0 {
                bail!("need 1 <= X <= p");
            }
            let outcome = match lemma {
                Lemma::Singleton => singleton_difference_holds(p, x),
                Lemma::Modp2 => mod_p2_property_holds(p, x.max(2)),
                Lemma::Graph => graph_property_holds(p, x.max(2)),
            };
            let mut v = json!({"holds": outcome.holds, "subsets_checked": outcome.subsets_checked});
            if matches!(lemma, Lemma::Singleton) {
                v["hadamard_bound"] = json!(hadamard_bound(x as u32));
            }
            if witness {
                if let Some(w) = &outcome.witness {
                    let modulus = if matches!(lemma, Lemma::Modp2) { p * p } else { p };
                    v["witness"] = json!(w);
                    v["profile"] = json!(DifferenceProfile::new(modulus, w).counts);
                    if matches!(lemma, Lemma::Modp2) {
                        v["pair"] = json!(modp2_pair(p, w));
                    }
                }
            }
            emit(js, &v);
        }
        Command::Splitting {
            level,
            prime,
            castle_exponent,
            self_conjugate,
        } => {
            let prof = splitting_profile(level, prime)?;
            let mut v = serde_json::to_value(&prof)?;
            if let Some(m) = castle_exponent {
                let b = uk_box(&prof, m, self_conjugate)?;
                v["uk_box"] = json!({"dims": b.dims, "range": [b.lo, b.hi],
                                     "size": b.size().to_string()});
            }
            emit(js, &v);
        }
        Command::VerifyTables { table, bound } => {
            let wanted = |t: TableName| table.is_none() || table == Some(t);
            let mut all = true;
            let runs: [(TableName, &dyn Fn() -> TableReport); 6] = [
                (TableName::One, &verify_table1),
                (TableName::Two, &verify_table2),
                (TableName::Three, &verify_table3),
                (TableName::Families, &|| verify_family_levels(bound)),
                (TableName::Splitting, &verify_splitting),
                (TableName::Lemmas, &verify_difference_lemmas),
            ];
            for (name, f) in runs {
                if wanted(name) {
                    let r = f();
                    all &= r.passed;
                    print_report(js, &r);
                }
            }
            return Ok(all);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
