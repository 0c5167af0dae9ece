//! Command-line front end.
//!
//! Every subcommand runs one operation or harness and emits an
//! [`ExperimentRecord`](crate::experiments::ExperimentRecord) in JSON
//! (canonical key order), CSV, or a short text rendering. Identical
//! invocations produce byte-identical JSON. Exit codes: `0` success, `1`
//! verdict-level failure (for example a no-candidate sampler result), `2`
//! usage error.

mod output;
mod sweep;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bits::{ensemble_stats, EnsembleParams, EnsembleStats};
use crate::dynamics::{
    evolve, invert, is_unitary_image, measure_cluster, padic_distance, PAdicLabel, UnitaryProgram,
};
use crate::error::{Error, Result};
use crate::experiments::{
    chsh_run, ghz_conflict, mz_complementarity, scale_estimates, sg_noncommutativity, si_census,
    uncertainty_harness, CensusMode, ChshConfig, ExperimentRecord, GhzConfig, MzConfig, MzMode,
    PhiSpec, ScaleConfig, ScaleInput, SgConfig, SiCensusConfig, UncertaintyConfig, VertexPool,
};
use crate::numtheory::{niven_classify, quadruple_verdict, triangle_verdict};
use crate::numtheory::{QuadrupleInstance, RationalAngle, RationalCosine, TriangleInstance};
use crate::states::{bell_pair, bloch_state, kqubit_build, SkeletonPoint};
use crate::parse_ratio;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "ensembleq",
    version,
    about = "Exact bit-string qubit ensembles: states, verdicts, and seeded experiment harnesses",
    after_help = "Output goes to stdout unless --out is given; relative --out paths are placed \
                  under $ENSEMBLEQ_OUT_DIR when that variable is set."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for the emitted record.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the record to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Include wall time in the record (breaks byte-identical output).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Debug, Clone)]
struct LatticeArgs {
    /// Lattice resolution N (quarter length).
    #[arg(long, default_value_t = 100)]
    n: u32,

    /// Null-symbol count appended to each string.
    #[arg(long, default_value_t = 0)]
    nx: u32,
}

impl LatticeArgs {
    fn params(&self) -> Result<EnsembleParams> {
        EnsembleParams::new(self.n, self.nx)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a single-qubit lattice string and report its exact statistics.
    Qubit {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Amplitude index m (0..=2N).
        #[arg(long)]
        m: u32,
        /// Phase index n (0..4N).
        #[arg(long, default_value_t = 0)]
        phase: u32,
        /// Also write the packed binary form here.
        #[arg(long)]
        out_bin: Option<std::path::PathBuf>,
    },
    /// Build a multi-qubit state; optionally write binary planes + sidecar.
    Kqubit {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Qubit count K.
        #[arg(long)]
        k: u32,
        /// Parameter tree in preorder, `m:n,m:n,...` (2^K - 1 entries);
        /// defaults to all `0:0`.
        #[arg(long)]
        tree: Option<String>,
        /// Base path for `<base>.bin` and `<base>.json`.
        #[arg(long)]
        out_base: Option<std::path::PathBuf>,
    },
    /// Build an entangled pair and report its exact correlation.
    Bell {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        ma: u32,
        #[arg(long)]
        mb: u32,
    },
    /// Four-setting correlation run; defaults to the quadrature geometry.
    Chsh {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Alice's settings in turns.
        #[arg(long, default_value = "0")]
        a0: String,
        #[arg(long, default_value = "1/4")]
        a1: String,
        /// Bob's settings in turns.
        #[arg(long, default_value = "1/8")]
        b0: String,
        #[arg(long, default_value = "7/8")]
        b1: String,
    },
    /// Exact-setting census over the measured-pair regions.
    #[command(name = "si-census")]
    SiCensus {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 2)]
        seed: u64,
        /// Region centers in turns.
        #[arg(long, default_value = "0")]
        a0: String,
        #[arg(long, default_value = "1/8")]
        a1: String,
        #[arg(long, default_value = "1/16")]
        b0: String,
        #[arg(long, default_value = "3/16")]
        b1: String,
        /// Region half-width in turns.
        #[arg(long, default_value = "1/64")]
        epsilon: String,
        /// Largest vertex-angle denominator in the pool.
        #[arg(long, default_value_t = 13)]
        pool_max_denominator: u32,
        /// Restrict the pool to exception-class vertex angles.
        #[arg(long)]
        pool_exceptions_only: bool,
        /// Cap on enumerated fourth-pair candidates.
        #[arg(long, default_value_t = 10_000)]
        max_candidates: usize,
        /// Three-region chain census instead of the four-region one.
        #[arg(long)]
        bell3: bool,
    },
    /// Interferometer complementarity run.
    Mz {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Nominal phase in turns.
        #[arg(long, default_value = "1/8")]
        phi: String,
        /// Control half-width (cosine units for interference, turns for
        /// which-way).
        #[arg(long, default_value = "1/50")]
        epsilon: String,
        /// Realize the which-way lattice first instead.
        #[arg(long)]
        which_way: bool,
    },
    /// Sequential-analyzer ordering run.
    Sg {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Nominal separation of the first pair, in turns.
        #[arg(long, default_value = "1/16")]
        theta_ab: String,
        /// Nominal separation of the second pair, in turns.
        #[arg(long, default_value = "1/12")]
        theta_bc: String,
        /// Nominal vertex angle in turns.
        #[arg(long, default_value = "1/5")]
        phi_b: String,
        /// Control half-width in turns.
        #[arg(long, default_value = "1/64")]
        epsilon: String,
    },
    /// Uncertainty-relation check at one lattice point.
    Uncertainty {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        phase: u32,
    },
    /// Polarization-basis conflict at one exact angle.
    Ghz {
        /// The angle as a rational turn, e.g. `1/7`.
        #[arg(long, conflicts_with = "cos")]
        phi: Option<String>,
        /// Alternatively the rational value of cos 2-phi, e.g. `3/5`.
        #[arg(long)]
        cos: Option<String>,
    },
    /// Classify the cosine of a rational angle.
    Niven {
        /// Angle in turns, e.g. `1/5`.
        fraction: String,
    },
    /// Closing-side verdict for a spherical triangle.
    Triangle {
        #[arg(long)]
        rab: String,
        #[arg(long)]
        rbc: String,
        /// Vertex angle in turns.
        #[arg(long)]
        phib: String,
    },
    /// Fourth-side verdict for the four-direction configuration.
    Quadruple {
        #[arg(long)]
        r00: String,
        #[arg(long)]
        r01: String,
        #[arg(long)]
        r10: String,
        #[arg(long)]
        phi0: String,
        #[arg(long)]
        phi1: String,
        /// Assert the two vertex angles are tied (not free parameters).
        #[arg(long)]
        dependent: bool,
    },
    /// Run a step program on the all-plus string.
    Evolve {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Steps `m:n,m:n,...`; empty for the identity program.
        #[arg(long, default_value = "")]
        program: String,
    },
    /// Disorder a lattice string by a seeded shuffle.
    Measure {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        phase: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ultrametric distance between two digit labels.
    Padic {
        /// Base p >= 2; defaults to 4N + nx of --n/--nx when omitted.
        #[arg(long)]
        base: Option<u64>,
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Require the base to be prime.
        #[arg(long)]
        require_prime: bool,
        /// First label digits, comma-separated.
        #[arg(long)]
        u: String,
        /// Second label digits, comma-separated.
        #[arg(long)]
        v: String,
    },
    /// Resolution, classical-limit, and qubit-ceiling estimates.
    Scale {
        /// Dimensionless energy ratio E/E_ref (1e-26 for a far-infrared
        /// photon).
        #[arg(long)]
        energy_ratio: Option<f64>,
        /// System mass in micrograms.
        #[arg(long, conflicts_with = "energy_ratio")]
        mass_ug: Option<f64>,
        /// Maximum string length, e.g. `1e62` (pairs with --n).
        #[arg(long, conflicts_with_all = ["energy_ratio", "mass_ug"])]
        max_len: Option<String>,
        /// Resolution used with --max-len.
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Run a harness across a range of N values, one CSV row per N.
    Sweep(sweep::SweepArgs),
}

/// Parses argv and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version and 2 for usage errors.
            e.exit();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NoCandidate(_) => 1,
        Error::Config(_)
        | Error::Parse(_)
        | Error::Domain(_)
        | Error::Shape(_)
        | Error::NullSymbol(_) => 2,
        _ => 1,
    }
}

fn execute(cli: Cli) -> Result<()> {
    if let Command::Sweep(args) = &cli.command {
        return sweep::run_sweep(args, cli.format, cli.out.as_deref());
    }
    let started = std::time::Instant::now();
    let mut record = dispatch(&cli.command)?;
    if cli.timings {
        record.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    output::emit(&record, cli.format, cli.out.as_deref())
}

fn dispatch(command: &Command) -> Result<ExperimentRecord> {
    match command {
        Command::Qubit {
            lattice,
            m,
            phase,
            out_bin,
        } => {
            let params = lattice.params()?;
            let pt = SkeletonPoint::new(*m, *phase, params)?;
            let state = bloch_state(&pt);
            let stats: EnsembleStats<i64> = ensemble_stats(&state)?;
            let mut record = ExperimentRecord::new(
                "qubit",
                &serde_json::json!({ "params": params, "m": m, "phase": phase }),
                0,
            )?;
            record.stat_ratio("cos_colatitude", &pt.cos_colatitude());
            record.stat_str("turn", &pt.turn().to_string());
            record.stat_ratio("minus_fraction", &stats.minus_fraction);
            record.stat_ratio("mean", &stats.mean);
            record.stat_f64("stddev", stats.stddev);
            record.stat_str("rle", &state.to_rle());
            if let Some(path) = out_bin {
                let file = std::fs::File::create(output::resolve_out_path(path))?;
                crate::bits::write_binary(&state, std::io::BufWriter::new(file))?;
            }
            Ok(record)
        }
        Command::Kqubit {
            lattice,
            k,
            tree,
            out_base,
        } => {
            let params = lattice.params()?;
            let pairs: Vec<(u32, u32)> = match tree {
                Some(text) => UnitaryProgram::parse(text)?.steps,
                None => vec![(0, 0); (1usize << k) - 1],
            };
            let state = kqubit_build(*k, &pairs, params)?;
            let mut record = ExperimentRecord::new(
                "kqubit",
                &serde_json::json!({ "params": params, "k": k, "tree": pairs }),
                0,
            )?;
            record.stat_int("rows", state.k() as i64);
            record.stat_int("row_len", state.row_len() as i64);
            record.stat_int("degrees_of_freedom", state.degrees_of_freedom() as i64);
            if let Some(base) = out_base {
                let base = output::resolve_out_path(base);
                let bin = base.with_extension("bin");
                let json = base.with_extension("json");
                let file = std::fs::File::create(&bin)?;
                crate::states::write_kqubit_binary(&state, std::io::BufWriter::new(file))?;
                std::fs::write(&json, serde_json::to_string_pretty(&state.sidecar())?)?;
                record.stat_str("binary_path", &bin.display().to_string());
                record.stat_str("sidecar_path", &json.display().to_string());
            }
            Ok(record)
        }
        Command::Bell { lattice, ma, mb } => {
            let params = lattice.params()?;
            let pair = bell_pair(*ma, *mb, params)?;
            let mut record = ExperimentRecord::new(
                "bell",
                &serde_json::json!({ "params": params, "m_a": ma, "m_b": mb }),
                0,
            )?;
            record.stat_ratio("correlation", &pair.correlation());
            record.stat_int("string_len", pair.alice().len() as i64);
            record.stat_int("plus_count_alice", pair.alice().count_plus() as i64);
            record.stat_int("minus_count_alice", pair.alice().count_minus() as i64);
            Ok(record)
        }
        Command::Chsh {
            lattice,
            seed,
            a0,
            a1,
            b0,
            b1,
        } => chsh_run(&ChshConfig {
            params: lattice.params()?,
            alice: [parse_ratio(a0)?, parse_ratio(a1)?],
            bob: [parse_ratio(b0)?, parse_ratio(b1)?],
            seed: *seed,
        }),
        Command::SiCensus {
            lattice,
            seed,
            a0,
            a1,
            b0,
            b1,
            epsilon,
            pool_max_denominator,
            pool_exceptions_only,
            max_candidates,
            bell3,
        } => si_census(&SiCensusConfig {
            params: lattice.params()?,
            mode: if *bell3 {
                CensusMode::Bell3
            } else {
                CensusMode::Chsh4
            },
            alice: [parse_ratio(a0)?, parse_ratio(a1)?],
            bob: [parse_ratio(b0)?, parse_ratio(b1)?],
            epsilon: parse_ratio(epsilon)?,
            pool: VertexPool {
                max_denominator: *pool_max_denominator,
                exceptions_only: *pool_exceptions_only,
            },
            max_candidates: *max_candidates,
            seed: *seed,
        }),
        Command::Mz {
            lattice,
            seed,
            phi,
            epsilon,
            which_way,
        } => mz_complementarity(&MzConfig {
            params: lattice.params()?,
            nominal_phi: RationalAngle::new(parse_ratio(phi)?),
            epsilon: parse_ratio(epsilon)?,
            mode: if *which_way {
                MzMode::WhichWayFirst
            } else {
                MzMode::InterferenceFirst
            },
            seed: *seed,
        }),
        Command::Sg {
            lattice,
            seed,
            theta_ab,
            theta_bc,
            phi_b,
            epsilon,
        } => sg_noncommutativity(&SgConfig {
            params: lattice.params()?,
            theta_ab: parse_ratio(theta_ab)?,
            theta_bc: parse_ratio(theta_bc)?,
            phi_b: parse_ratio(phi_b)?,
            epsilon: parse_ratio(epsilon)?,
            seed: *seed,
        }),
        Command::Uncertainty { lattice, m, phase } => uncertainty_harness(&UncertaintyConfig {
            params: lattice.params()?,
            m: *m,
            n: *phase,
        }),
        Command::Ghz { phi, cos } => {
            let spec = match (phi, cos) {
                (Some(p), None) => PhiSpec::Angle(RationalAngle::new(parse_ratio(p)?)),
                (None, Some(c)) => PhiSpec::Cosine(parse_ratio(c)?),
                _ => {
                    return Err(Error::Config(
                        "give exactly one of --phi or --cos".into(),
                    ))
                }
            };
            ghz_conflict(&GhzConfig { phi: spec })
        }
        Command::Niven { fraction } => {
            let angle = RationalAngle::new(parse_ratio::<i64>(fraction)?);
            let mut record = ExperimentRecord::new(
                "niven",
                &serde_json::json!({ "turns": angle.to_string() }),
                0,
            )?;
            record.verdict("classification", &niven_classify(&angle))?;
            Ok(record)
        }
        Command::Triangle { rab, rbc, phib } => {
            let instance: TriangleInstance = TriangleInstance {
                r_ab: RationalCosine::new(parse_ratio(rab)?)?,
                r_bc: RationalCosine::new(parse_ratio(rbc)?)?,
                phi_b: RationalAngle::new(parse_ratio(phib)?),
            };
            let mut record = ExperimentRecord::new(
                "triangle",
                &serde_json::json!({
                    "r_ab": instance.r_ab.to_string(),
                    "r_bc": instance.r_bc.to_string(),
                    "phi_b": instance.phi_b.to_string(),
                }),
                0,
            )?;
            record.verdict("cos_ac", &triangle_verdict(&instance))?;
            Ok(record)
        }
        Command::Quadruple {
            r00,
            r01,
            r10,
            phi0,
            phi1,
            dependent,
        } => {
            let instance: QuadrupleInstance = QuadrupleInstance {
                r_x0y0: RationalCosine::new(parse_ratio(r00)?)?,
                r_x0y1: RationalCosine::new(parse_ratio(r01)?)?,
                r_x1y0: RationalCosine::new(parse_ratio(r10)?)?,
                phi_x0: RationalAngle::new(parse_ratio(phi0)?),
                phi_x1: RationalAngle::new(parse_ratio(phi1)?),
                independent: !dependent,
            };
            let mut record = ExperimentRecord::new(
                "quadruple",
                &serde_json::json!({
                    "r_x0y0": instance.r_x0y0.to_string(),
                    "r_x0y1": instance.r_x0y1.to_string(),
                    "r_x1y0": instance.r_x1y0.to_string(),
                    "phi_x0": instance.phi_x0.to_string(),
                    "phi_x1": instance.phi_x1.to_string(),
                    "independent": instance.independent,
                }),
                0,
            )?;
            record.verdict("cos_x1y1", &quadruple_verdict(&instance))?;
            Ok(record)
        }
        Command::Evolve { lattice, program } => {
            let params = lattice.params()?;
            let program = UnitaryProgram::parse(program)?;
            let start = crate::bits::BitString::ones(params);
            let end = evolve(&program, &start)?;
            let back = invert(&program, &end)?;
            let mut record = ExperimentRecord::new(
                "evolve",
                &serde_json::json!({ "params": params, "program": program }),
                0,
            )?;
            record.stat_str("final_rle", &end.to_rle());
            record.stat_int("steps", program.len() as i64);
            match is_unitary_image(&end) {
                Some((m, n)) => {
                    record.verdict_value(
                        "unitary_image",
                        serde_json::json!({ "status": "MEMBER", "m": m, "n": n }),
                    );
                }
                None => record.verdict_status("unitary_image", "NON-MEMBER"),
            }
            record.verdict_status(
                "round_trip",
                if back == start { "EXACT" } else { "BROKEN" },
            );
            Ok(record)
        }
        Command::Measure {
            lattice,
            m,
            phase,
            seed,
        } => {
            let params = lattice.params()?;
            let pt = SkeletonPoint::new(*m, *phase, params)?;
            let outcome = measure_cluster(&bloch_state(&pt), *seed);
            let summary = outcome.summary();
            let mut record = ExperimentRecord::new(
                "measure",
                &serde_json::json!({ "params": params, "m": m, "phase": phase }),
                *seed,
            )?;
            record.stat_str("permutation_digest", &summary.permutation_digest);
            record.stat_int("plus_count", summary.plus_count as i64);
            record.stat_int("minus_count", summary.minus_count as i64);
            record.stat_int("null_count", summary.null_count as i64);
            match is_unitary_image(outcome.clustered()) {
                Some((m, n)) => record.verdict_value(
                    "unitary_image",
                    serde_json::json!({ "status": "MEMBER", "m": m, "n": n }),
                ),
                None => record.verdict_status("unitary_image", "NON-MEMBER"),
            }
            Ok(record)
        }
        Command::Padic {
            base,
            lattice,
            require_prime,
            u,
            v,
        } => {
            let params = if *require_prime {
                EnsembleParams::new_prime(lattice.n, lattice.nx)?
            } else {
                lattice.params()?
            };
            let base = base.unwrap_or_else(|| params.p());
            if *require_prime && !is_prime_u64(base) {
                return Err(Error::Domain(format!("base {base} is not prime")));
            }
            let parse_digits = |text: &str| -> Result<Vec<u32>> {
                text.split(',')
                    .map(|d| {
                        d.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad digit `{d}`")))
                    })
                    .collect()
            };
            let u = PAdicLabel::new(base, parse_digits(u)?)?;
            let v = PAdicLabel::new(base, parse_digits(v)?)?;
            let d = padic_distance(&u, &v)?;
            let mut record = ExperimentRecord::new(
                "padic",
                &serde_json::json!({ "base": base, "u": u.digits(), "v": v.digits() }),
                0,
            )?;
            record.stat_int("base", base as i64);
            match d.prefix {
                Some(k) => record.stat_int("common_prefix", k as i64),
                None => record.stat_str("common_prefix", "identical"),
            }
            record.stat_f64("distance", d.as_f64());
            Ok(record)
        }
        Command::Scale {
            energy_ratio,
            mass_ug,
            max_len,
            n,
        } => {
            let input = match (energy_ratio, mass_ug, max_len) {
                (Some(r), None, None) => ScaleInput::EnergyRatio(*r),
                (None, Some(m), None) => ScaleInput::MassMicrograms(*m),
                (None, None, Some(l)) => ScaleInput::MaxLength {
                    length: l.clone(),
                    n: *n,
                },
                _ => {
                    return Err(Error::Config(
                        "give exactly one of --energy-ratio, --mass-ug, --max-len".into(),
                    ))
                }
            };
            scale_estimates(&ScaleConfig { input })
        }
        Command::Sweep(_) => unreachable!("handled in execute"),
    }
}

fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
