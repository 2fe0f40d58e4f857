//! Command-line front end.  Every subcommand prints either CSV (header row
//! first, `;` as the in-field list separator) or a single JSON document.
//! Exit codes: 0 success, 1 property failure, 2 usage/domain error.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::allocation::{
    allocation_counts, kappa, ndca_allocate, vbfr_allocate, AgentAllocation, Coalition, Variant,
};
use crate::bench::{
    amortised_ratio, dcvc_checksum, memory_model, ndca_checksum, profile_components, run_timed,
    AmortisedInputs,
};
use crate::dcvc::dcvc_allocate;
use crate::error::Result;
use crate::increment_array::{canonical_shift, gen_inc_array, period, IncrementArray};
use crate::necklace::fkm_enumerate;
use crate::verify::{check_allocation_properties_with, coalition_to_ia, Algorithm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn parse_variant(s: &str) -> Result<Variant> {
    Variant::parse(s)
}

#[derive(Parser)]
#[command(name = "ndca", version, about = "Communication-free coalition value calculation allocation")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for `verify`
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Full N-DCA allocation for one agent
    Allocate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        agent: u32,
        #[arg(long, default_value = "per-size", value_parser = parse_variant)]
        variant: Variant,
        /// Emit members in ascending order instead of generation order
        #[arg(long)]
        sorted: bool,
    },
    /// Baseline DCVC allocation for one agent
    DcvcAllocate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        agent: u32,
    },
    /// VBFR allocation (min-member shares) for one agent
    VbfrAllocate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        agent: u32,
        /// Restrict to one coalition size
        #[arg(long)]
        size: Option<u32>,
    },
    /// Per-size allocation counts of all algorithms side by side
    Compare {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        agent: u32,
        #[arg(long, default_value = "per-size", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Property sweep over a range of n; exit 1 on any failure
    Verify {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 16)]
        n_max: u32,
        /// Skip exhaustive set checks, keep count-level checks
        #[arg(long)]
        counts_only: bool,
    },
    /// Enumerate necklaces for one n
    Necklaces {
        #[arg(long)]
        n: u32,
        /// Include increment array and period columns
        #[arg(long)]
        with_ia: bool,
    },
    /// Regenerate a published table from first principles
    Tables {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Timed allocation runs (CSV: n,algorithm,R,mean_ns,sd_ns,ci95_ns,checksum)
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [10u32, 12, 14])]
        n: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        agent: u32,
        #[arg(long, default_value_t = 100)]
        runs: u32,
        #[arg(long, default_value = "per-size", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Subtraction-method component profile of the N-DCA pipeline
    Profile {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        agent: u32,
        #[arg(long, default_value_t = 100)]
        runs: u32,
    },
    /// Amortised total-time ratio eta(c)
    Amortise {
        /// N-DCA generation time, milliseconds
        #[arg(long)]
        t_ndca_ms: f64,
        /// DCVC generation time, milliseconds
        #[arg(long)]
        t_dcvc_ms: f64,
        /// Coalitions per agent
        #[arg(long)]
        m: u64,
        /// Per-coalition evaluation costs to sweep, microseconds
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.1, 1.0, 10.0, 100.0])]
        c_us: Vec<f64>,
    },
    /// Analytical per-agent working-memory model
    Memory {
        #[arg(long, value_delimiter = ',', default_values_t = [5u32, 10, 15, 20, 25])]
        n: Vec<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// All 63 coalition assignments for n=6 under the global offset
    Example6,
    /// Periodic increment arrays for n=6 with their designation windows
    Designation6,
    /// Per-size and aggregate imbalance with kappa, n=2..25
    Imbalance,
    /// The 14 necklaces of n=6 with their increment arrays
    Fkm6,
}

// Write a block to stdout, exiting quietly if the pipe is closed (head etc.).
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

/// Uniform tabular output; CSV fields never contain commas (lists use `;`).
struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn print(&self, format: Format) {
        match format {
            Format::Csv => {
                let mut lines = vec![self.headers.join(",")];
                lines.extend(self.rows.iter().map(|row| row.join(",")));
                emit(&lines.join("\n"));
            }
            Format::Json => {
                let objs: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: serde_json::Map<String, serde_json::Value> = self
                            .headers
                            .iter()
                            .zip(row)
                            .map(|(h, v)| (h.to_string(), json!(v)))
                            .collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                emit(&serde_json::to_string_pretty(&objs).unwrap());
            }
        }
    }
}

fn fmt_members(c: &Coalition, sorted: bool) -> String {
    let ms = if sorted {
        c.sorted_members()
    } else {
        c.members().to_vec()
    };
    ms.iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn fmt_ia(ia: &IncrementArray) -> String {
    ia.offsets()
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn allocation_table(alloc: &AgentAllocation, sorted: bool, with_source: bool) -> Table {
    let mut table = Table::new(if with_source {
        vec!["size", "members", "source_ia", "periodic"]
    } else {
        vec!["size", "members"]
    });
    for (size, coalitions) in &alloc.by_size {
        for c in coalitions {
            let mut row = vec![size.to_string(), fmt_members(c, sorted)];
            if with_source {
                let (_, anchored) = coalition_to_ia(&c.sorted_members(), alloc.n)
                    .expect("allocated coalition is well-formed");
                let canonical = canonical_shift(&anchored);
                let periodic = !period(&canonical).is_aperiodic();
                row.push(fmt_ia(&canonical));
                row.push(periodic.to_string());
            }
            table.push(row);
        }
    }
    table
}

// Periodic IAs of one n with their global-offset designation windows,
// presented size-ascending; H itself accrues in reverse generation order.
// Shared by `tables designation6` and the golden tests.
fn designation_rows(n: u32) -> Vec<(IncrementArray, u32, u64, Vec<u32>)> {
    let mut periodics = Vec::new();
    fkm_enumerate(n, 2, |neck| {
        let t = match gen_inc_array(neck) {
            Ok(t) if !t.is_empty() => t,
            _ => return,
        };
        let info = period(&t);
        if !info.is_aperiodic() {
            periodics.push((t, info.stride));
        }
    });
    let mut rows = Vec::new();
    let mut h = 0u64;
    for (t, d) in periodics.into_iter().rev() {
        let window: Vec<u32> = (1..=n)
            .filter(|&x| crate::allocation::designation_test(x, h, d, n))
            .collect();
        rows.push((t, d, h, window));
        h += d as u64;
    }
    rows.sort_by_key(|(t, ..)| t.size());
    rows
}

fn cmd_tables(which: TableKind) -> Table {
    match which {
        TableKind::Fkm6 => {
            let mut table = Table::new(vec!["index", "necklace", "size", "ia"]);
            let mut i = 0;
            fkm_enumerate(6, 2, |neck| {
                i += 1;
                let ia = gen_inc_array(neck).unwrap();
                table.push(vec![
                    i.to_string(),
                    neck.to_string(),
                    ia.size().to_string(),
                    fmt_ia(&ia),
                ]);
            });
            table
        }
        TableKind::Designation6 => {
            let mut table = Table::new(vec!["ia", "size", "d", "h", "window"]);
            for (t, d, h, window) in designation_rows(6) {
                table.push(vec![
                    fmt_ia(&t),
                    t.size().to_string(),
                    d.to_string(),
                    h.to_string(),
                    window
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                ]);
            }
            table
        }
        TableKind::Example6 => {
            let mut table = Table::new(vec!["agent", "size", "members"]);
            for x in 1..=6 {
                let alloc = ndca_allocate(x, 6, Variant::GlobalOffset).unwrap();
                for (size, coalitions) in &alloc.by_size {
                    for c in coalitions {
                        table.push(vec![
                            x.to_string(),
                            size.to_string(),
                            fmt_members(c, false),
                        ]);
                    }
                }
            }
            table
        }
        TableKind::Imbalance => {
            let mut table = Table::new(vec![
                "n",
                "kappa",
                "per_size_aggregate",
                "global_max_per_size",
                "global_aggregate",
            ]);
            for n in 2..=25u32 {
                let per_size = allocation_counts(n, Variant::PerSizeOffset);
                let global = allocation_counts(n, Variant::GlobalOffset);
                let spread = |counts: &[Vec<u64>], s: usize| {
                    let col: Vec<u64> = counts.iter().map(|row| row[s]).collect();
                    col.iter().max().unwrap() - col.iter().min().unwrap()
                };
                let per_size_agg: u64 = (0..n as usize).map(|s| spread(&per_size, s)).sum();
                let global_max = (0..n as usize).map(|s| spread(&global, s)).max().unwrap();
                let totals: Vec<u64> = global.iter().map(|row| row.iter().sum()).collect();
                let global_agg = totals.iter().max().unwrap() - totals.iter().min().unwrap();
                table.push(vec![
                    n.to_string(),
                    kappa(n).unwrap().to_string(),
                    per_size_agg.to_string(),
                    global_max.to_string(),
                    global_agg.to_string(),
                ]);
            }
            table
        }
    }
}

fn cmd_verify(n_min: u32, n_max: u32, counts_only: bool, jobs: usize, format: Format) -> Result<bool> {
    let ns: Vec<u32> = (n_min..=n_max).collect();
    let algorithms = [
        Algorithm::Ndca(Variant::PerSizeOffset),
        Algorithm::Ndca(Variant::GlobalOffset),
        Algorithm::Ndca(Variant::LowestId),
        Algorithm::Dcvc,
    ];
    let jobs = jobs.max(1);
    let mut reports = Vec::new();
    // fan n values out over worker threads; each (n, algorithm) run is
    // internally single-threaded and deterministic
    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::new();
        for chunk in ns.chunks(ns.len().div_ceil(jobs)) {
            handles.push(scope.spawn(move || -> Result<Vec<_>> {
                let mut out = Vec::new();
                for &n in chunk {
                    for algorithm in algorithms {
                        out.push(check_allocation_properties_with(n, algorithm, counts_only)?);
                    }
                }
                Ok(out)
            }));
        }
        for handle in handles {
            reports.extend(handle.join().expect("verification worker panicked")?);
        }
        Ok(())
    })?;
    reports.sort_by_key(|r| r.n);

    let all_pass = reports.iter().all(|r| r.passes());
    match format {
        Format::Json => {
            emit(&serde_json::to_string_pretty(&reports).unwrap());
        }
        Format::Csv => {
            let mut table = Table::new(vec![
                "n",
                "algorithm",
                "exhaustive",
                "complete",
                "redundant_pairs",
                "self_interest_violations",
                "per_size_imbalance_max",
                "aggregate_imbalance",
                "kappa",
                "kappa_match",
                "per_agent_totals",
                "pass",
            ]);
            for r in &reports {
                table.push(vec![
                    r.n.to_string(),
                    r.algorithm.to_string(),
                    r.exhaustive.to_string(),
                    r.complete.to_string(),
                    r.redundant_pairs.to_string(),
                    r.self_interest_violations.to_string(),
                    r.per_size_imbalance_max.to_string(),
                    r.aggregate_imbalance.to_string(),
                    r.kappa.to_string(),
                    r.kappa_match.to_string(),
                    r.per_agent_totals
                        .iter()
                        .map(|t| t.to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                    r.passes().to_string(),
                ]);
            }
            table.print(Format::Csv);
        }
    }
    Ok(all_pass)
}

/// Runs one parsed invocation.  `Ok(true)` means exit 0, `Ok(false)` exit 1
/// (property failure), `Err` exit 2 (domain error).
pub fn run(cli: Cli) -> Result<bool> {
    let format = cli.format;
    match cli.command {
        Command::Allocate {
            n,
            agent,
            variant,
            sorted,
        } => {
            let alloc = ndca_allocate(agent, n, variant)?;
            allocation_table(&alloc, sorted, true).print(format);
        }
        Command::DcvcAllocate { n, agent } => {
            let alloc = dcvc_allocate(agent, n)?;
            allocation_table(&alloc, false, false).print(format);
        }
        Command::VbfrAllocate { n, agent, size } => {
            let mut table = Table::new(vec!["size", "members"]);
            let sizes: Vec<u32> = match size {
                Some(s) => vec![s],
                None => (1..=n).collect(),
            };
            for s in sizes {
                for c in vbfr_allocate(agent, n, s)? {
                    table.push(vec![s.to_string(), fmt_members(&c, false)]);
                }
            }
            table.print(format);
        }
        Command::Compare { n, agent, variant } => {
            let ndca = ndca_allocate(agent, n, variant)?;
            let dcvc = dcvc_allocate(agent, n)?;
            let mut table = Table::new(vec!["size", "ndca", "dcvc", "vbfr"]);
            for s in 1..=n {
                table.push(vec![
                    s.to_string(),
                    ndca.size_count(s).to_string(),
                    dcvc.size_count(s).to_string(),
                    vbfr_allocate(agent, n, s)?.len().to_string(),
                ]);
            }
            table.print(format);
        }
        Command::Verify {
            n_min,
            n_max,
            counts_only,
        } => {
            return cmd_verify(n_min, n_max, counts_only, cli.jobs, format);
        }
        Command::Necklaces { n, with_ia } => {
            let mut table = Table::new(if with_ia {
                vec!["index", "necklace", "size", "ia", "period", "stride"]
            } else {
                vec!["index", "necklace", "size"]
            });
            let mut i = 0;
            fkm_enumerate(n, 2, |neck| {
                i += 1;
                let mut row = vec![
                    i.to_string(),
                    neck.to_string(),
                    neck.white_count().to_string(),
                ];
                if with_ia {
                    let ia = gen_inc_array(neck).unwrap();
                    if ia.is_empty() {
                        row.extend(["".into(), "".into(), "".into()]);
                    } else {
                        let info = period(&ia);
                        row.push(fmt_ia(&ia));
                        row.push(info.period.to_string());
                        row.push(info.stride.to_string());
                    }
                }
                table.push(row);
            });
            table.print(format);
        }
        Command::Tables { which } => cmd_tables(which).print(format),
        Command::Bench {
            n,
            agent,
            runs,
            variant,
        } => {
            let mut table = Table::new(vec![
                "n",
                "algorithm",
                "R",
                "mean_ns",
                "sd_ns",
                "ci95_ns",
                "checksum",
            ]);
            for &n in &n {
                // surface domain errors (agent range, overflow) before timing
                ndca_checksum(agent, n, variant)?;
                let ndca = run_timed(
                    || ndca_checksum(agent, n, variant).unwrap(),
                    runs,
                )?;
                let dcvc = run_timed(|| dcvc_checksum(agent, n).unwrap(), runs)?;
                for (name, stats) in [("ndca", ndca), ("dcvc", dcvc)] {
                    table.push(vec![
                        n.to_string(),
                        name.to_string(),
                        stats.runs.to_string(),
                        format!("{:.1}", stats.mean_ns),
                        format!("{:.1}", stats.stddev_ns),
                        format!("{:.1}", stats.ci95_half_width_ns),
                        format!("{:#x}", stats.checksum),
                    ]);
                }
            }
            table.print(format);
        }
        Command::Profile { n, agent, runs } => {
            let profile = profile_components(agent, n, runs)?;
            let mut table = Table::new(vec!["level", "mean_ns", "sd_ns", "component_ns", "share"]);
            let names = ["fkm", "gen_inc_array", "period", "designation", "gen_coalition"];
            for (i, name) in names.iter().enumerate() {
                table.push(vec![
                    name.to_string(),
                    format!("{:.1}", profile.level_stats[i].mean_ns),
                    format!("{:.1}", profile.level_stats[i].stddev_ns),
                    format!("{:.1}", profile.component_ns[i]),
                    format!("{:.4}", profile.component_shares[i]),
                ]);
            }
            table.print(format);
        }
        Command::Amortise {
            t_ndca_ms,
            t_dcvc_ms,
            m,
            c_us,
        } => {
            let mut table = Table::new(vec!["c_us", "eta"]);
            for c in c_us {
                let eta = amortised_ratio(&AmortisedInputs {
                    t_ndca: t_ndca_ms * 1e-3,
                    t_dcvc: t_dcvc_ms * 1e-3,
                    m,
                    c: c * 1e-6,
                });
                table.push(vec![format!("{c}"), format!("{eta:.6}")]);
            }
            table.print(format);
        }
        Command::Memory { n } => {
            let mut table = Table::new(vec!["n", "ndca_bytes", "dcvc_bytes"]);
            for n in n {
                let (a, b) = memory_model(n);
                table.push(vec![n.to_string(), a.to_string(), b.to_string()]);
            }
            table.print(format);
        }
    }
    Ok(true)
}
