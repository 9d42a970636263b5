//! Implementations of the four subcommands.

use std::path::PathBuf;
use std::time::Instant;

use num::Integer;
use rayon::prelude::*;
use stirling_padic::bernoulli::BernoulliCache;
use stirling_padic::conjectures::{self, AScope, SweepGrid};
use stirling_padic::engine::{stirling1_valuation, ENGINE_ROW_LIMIT};
use stirling_padic::harmonic::{elementary_symmetric, harmonic_power};
use stirling_padic::stirling::{m_stirling, stirling1};
use stirling_padic::verification::{self as vf, CheckRecord};
use stirling_padic::{Error, Prime};

use crate::cachefile;
use crate::grid::{a_values_for, parse_a_scope, parse_primes, parse_range, parse_range_u32};
use crate::report::{ky_records, outcome_record, ReportDocument};
use crate::{CacheAction, CliError, ComputeKind, Format, GridArgs, OutputArgs, Suite};

pub fn compute(kind: ComputeKind, cache_flag: Option<PathBuf>) -> Result<i32, CliError> {
    match kind {
        ComputeKind::Stirling { n, k } => println!("{}", stirling1(n, k)?),
        ComputeKind::Mstirling { m, n, k } => println!("{}", m_stirling(m, n, k)?),
        ComputeKind::Valuation { n, k, p } => {
            let p = Prime::new(p)?;
            if n > ENGINE_ROW_LIMIT {
                return Err(Error::resource(format!(
                    "row {n} exceeds the modular-engine limit {ENGINE_ROW_LIMIT}"
                ))
                .into());
            }
            println!("{}", stirling1_valuation(n, k, p));
        }
        ComputeKind::Harmonic { n, r } => {
            if n == 0 {
                return Err(Error::parameter("harmonic numbers need n >= 1").into());
            }
            println!("{}", harmonic_power(n, r));
        }
        ComputeKind::Elemsym { n, k } => println!("{}", elementary_symmetric(n, k)),
        ComputeKind::Bernoulli { n } => {
            let cache = load_cache(cache_flag)?;
            println!("{}", cache.get(n)?);
        }
        ComputeKind::Regular { p } => {
            let p = Prime::new(p)?;
            let cache = load_cache(cache_flag)?;
            let indices = stirling_padic::bernoulli::irregular_indices(&cache, p)?;
            if indices.is_empty() {
                println!("regular");
            } else {
                println!("irregular {indices:?}");
            }
        }
    }
    Ok(0)
}

fn load_cache(flag: Option<PathBuf>) -> Result<BernoulliCache, CliError> {
    let path = cachefile::resolve_path(flag);
    Ok(cachefile::load(&path)?.unwrap_or_default())
}

/// One unit of verification work; grids expand to lists of these and the
/// worker pool maps over them.
enum Cell {
    Theorem1 { p: u64, a: u64 },
    Theorem2 { p: u64, a: u64, n: u32 },
    EvenStep { p: u64, a: u64, k: u64, lo: u32, hi: u32 },
    OddStep { p: u64, a: u64, k: u64, lo: u32, hi: u32 },
    Boyd { p: u64, nmax: u64 },
    Washington { p: u64 },
    Symmetric { p: u64 },
    Prow { p: u64 },
    Shifted { p: u64, a: u64, n: u32 },
    Corollary13 { p: u64, a: u64 },
}

fn run_cell(cache: &BernoulliCache, cell: &Cell) -> Result<Vec<CheckRecord>, Error> {
    match *cell {
        Cell::Theorem1 { p, a } => vf::verify_theorem1(cache, Prime::new(p)?, a),
        Cell::Theorem2 { p, a, n } => vf::verify_theorem2(Prime::new(p)?, a, n),
        Cell::EvenStep { p, a, k, lo, hi } => vf::verify_even_step(Prime::new(p)?, a, k, lo, hi),
        Cell::OddStep { p, a, k, lo, hi } => vf::verify_odd_step(Prime::new(p)?, a, k, lo, hi),
        Cell::Boyd { p, nmax } => vf::verify_boyd(Prime::new(p)?, nmax),
        Cell::Washington { p } => vf::verify_washington(cache, Prime::new(p)?),
        Cell::Symmetric { p } => vf::verify_hp_symmetric(cache, Prime::new(p)?),
        Cell::Prow { p } => vf::verify_stirling_p_row(cache, Prime::new(p)?),
        Cell::Shifted { p, a, n } => vf::verify_shifted_congruence(Prime::new(p)?, a, n),
        Cell::Corollary13 { p, a } => vf::verify_corollary_1_3(cache, Prime::new(p)?, a),
    }
}

struct ParsedGrid {
    primes: Vec<u64>,
    a_scope: AScope,
    n_range: Option<(u32, u32)>,
    m_range: Option<(u32, u32)>,
    k_range: Option<(u64, u64)>,
    nmax: u64,
    jobs: usize,
    cache_flag: Option<PathBuf>,
    strict_conjectures: bool,
}

fn parse_grid(grid: &GridArgs) -> Result<ParsedGrid, CliError> {
    Ok(ParsedGrid {
        primes: parse_primes(&grid.p)?,
        a_scope: parse_a_scope(grid.a.as_deref())?,
        n_range: grid
            .n
            .as_deref()
            .map(|s| parse_range_u32("n", s))
            .transpose()?,
        m_range: grid
            .m
            .as_deref()
            .map(|s| parse_range_u32("m", s))
            .transpose()?,
        k_range: grid
            .k
            .as_deref()
            .map(|s| parse_range("k", s))
            .transpose()?,
        nmax: grid.nmax.unwrap_or(30),
        jobs: grid
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        cache_flag: grid.cache.clone(),
        strict_conjectures: grid.strict_conjectures,
    })
}

fn row_fits(p: u64, a: u64, n: u32) -> bool {
    (a as u128) * (p as u128).pow(n) <= ENGINE_ROW_LIMIT as u128
}

fn step_cells(
    g: &ParsedGrid,
    even: bool,
    cells: &mut Vec<Cell>,
) -> Result<(), CliError> {
    let Some((klo, khi)) = g.k_range else {
        return Err(CliError::usage(
            "--k is required for the step suites (value or range)",
        ));
    };
    let (lo, hi) = g.n_range.unwrap_or((1, 4));
    for &p in &g.primes {
        for a in a_values_for(&g.a_scope, p, false) {
            if a.gcd(&p) != 1 {
                continue;
            }
            for k in klo..=khi {
                let fits = if even {
                    k == 1 || (k >= 2 && k % 2 == 0)
                } else {
                    k >= 3 && k % 2 == 1
                };
                if !fits {
                    continue;
                }
                if even {
                    cells.push(Cell::EvenStep { p, a, k, lo, hi });
                } else {
                    cells.push(Cell::OddStep { p, a, k, lo, hi });
                }
            }
        }
    }
    Ok(())
}

fn cells_for(suite: Suite, g: &ParsedGrid, cache: &BernoulliCache) -> Result<Vec<Cell>, CliError> {
    let mut cells = Vec::new();
    match suite {
        Suite::Theorem1 => {
            for &p in &g.primes {
                for a in a_values_for(&g.a_scope, p, true) {
                    cells.push(Cell::Theorem1 { p, a });
                }
            }
        }
        Suite::Theorem2 => {
            let (lo, hi) = g.n_range.unwrap_or((1, 2));
            for &p in &g.primes {
                for a in a_values_for(&g.a_scope, p, false) {
                    if a.gcd(&p) != 1 {
                        continue;
                    }
                    for n in lo..=hi {
                        cells.push(Cell::Theorem2 { p, a, n });
                    }
                }
            }
        }
        Suite::EvenStep => step_cells(g, true, &mut cells)?,
        Suite::OddStep => step_cells(g, false, &mut cells)?,
        Suite::Boyd => {
            for &p in &g.primes {
                cells.push(Cell::Boyd { p, nmax: g.nmax });
            }
        }
        Suite::Washington => {
            for &p in &g.primes {
                cells.push(Cell::Washington { p });
            }
        }
        Suite::Symmetric => {
            for &p in &g.primes {
                cells.push(Cell::Symmetric { p });
            }
        }
        Suite::Prow => {
            for &p in &g.primes {
                cells.push(Cell::Prow { p });
            }
        }
        Suite::Shifted => {
            let (lo, hi) = g.n_range.unwrap_or((1, 1));
            for &p in &g.primes {
                for a in a_values_for(&g.a_scope, p, false) {
                    if a.gcd(&p) != 1 {
                        continue;
                    }
                    for n in lo..=hi {
                        cells.push(Cell::Shifted { p, a, n });
                    }
                }
            }
        }
        Suite::Corollary13 => {
            for &p in &g.primes {
                for a in a_values_for(&g.a_scope, p, true) {
                    cells.push(Cell::Corollary13 { p, a });
                }
            }
        }
        Suite::All => {
            // every suite at bounded defaults; infeasible cells are
            // filtered rather than erroring, and corollary13 is limited
            // to regular primes (it rejects irregular ones by contract)
            for &p in &g.primes {
                let a_list = a_values_for(&g.a_scope, p, true);
                for &a in &a_list {
                    cells.push(Cell::Theorem1 { p, a });
                    for n in 1..=2u32 {
                        if row_fits(p, a, n) {
                            cells.push(Cell::Theorem2 { p, a, n });
                        }
                    }
                    let hi = (1..=3u32).take_while(|&n| row_fits(p, a, n)).last();
                    if let Some(hi) = hi {
                        cells.push(Cell::EvenStep { p, a, k: 4, lo: 1, hi });
                        cells.push(Cell::OddStep { p, a, k: 5, lo: 1, hi });
                    }
                    if a * p <= stirling_padic::verification::SHIFTED_EXACT_LIMIT {
                        cells.push(Cell::Shifted { p, a, n: 1 });
                    }
                }
                cells.push(Cell::Boyd { p, nmax: g.nmax });
                cells.push(Cell::Washington { p });
                cells.push(Cell::Symmetric { p });
                cells.push(Cell::Prow { p });
                if stirling_padic::bernoulli::is_regular(cache, Prime::new(p)?)? {
                    for &a in &a_list {
                        cells.push(Cell::Corollary13 { p, a });
                    }
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(CliError::usage(
            "the requested grid contains no valid cells",
        ));
    }
    Ok(cells)
}

fn worker_pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage(format!("cannot build worker pool: {e}")))
}

fn emit(doc: &ReportDocument, output: &OutputArgs) -> Result<(), CliError> {
    match (&output.out, output.format) {
        (Some(path), Format::Json) => std::fs::write(path, doc.to_json() + "\n")?,
        (Some(path), Format::Csv) => {
            let file = std::fs::File::create(path)?;
            doc.write_csv(file)?;
        }
        (None, Format::Json) => println!("{}", doc.to_json()),
        (None, Format::Csv) => {
            let stdout = std::io::stdout();
            doc.write_csv(stdout.lock())?;
        }
    }
    Ok(())
}

pub fn verify(suite: Suite, grid: GridArgs, output: OutputArgs) -> Result<i32, CliError> {
    let started = Instant::now();
    let g = parse_grid(&grid)?;
    let cache = load_cache(g.cache_flag.clone())?;
    prewarm(&cache, &g.primes)?;
    let cells = cells_for(suite, &g, &cache)?;
    let pool = worker_pool(g.jobs)?;
    let results: Result<Vec<Vec<CheckRecord>>, Error> =
        pool.install(|| cells.par_iter().map(|c| run_cell(&cache, c)).collect());
    let records: Vec<CheckRecord> = results?.into_iter().flatten().collect();
    let doc = ReportDocument::assemble(records, started.elapsed().as_millis() as u64, false);
    emit(&doc, &output)?;
    eprintln!(
        "verify: {} pass, {} fail, {} hypothesis-not-met",
        doc.summary.pass, doc.summary.fail, doc.summary.hypothesis_not_met
    );
    Ok(if doc.summary.fail > 0 { 1 } else { 0 })
}

fn prewarm(cache: &BernoulliCache, primes: &[u64]) -> Result<(), Error> {
    if let Some(&top) = primes.iter().max() {
        cache.ensure(top.saturating_sub(3).max(4))?;
    }
    Ok(())
}

pub fn sweep(grid: GridArgs, conjectures: Vec<u8>, output: OutputArgs) -> Result<i32, CliError> {
    let started = Instant::now();
    let g = parse_grid(&grid)?;
    let cache = load_cache(g.cache_flag.clone())?;
    prewarm(&cache, &g.primes)?;
    let sweep_grid = SweepGrid {
        primes: g.primes.clone(),
        a_scope: g.a_scope.clone(),
        n_range: g.n_range.unwrap_or((1, 1)),
        m_range: g.m_range,
        k_range: g.k_range,
        conjectures,
    };
    let groups = conjectures::enumerate_groups(&sweep_grid)?;
    let pool = worker_pool(g.jobs)?;
    let results: Result<Vec<_>, Error> = pool.install(|| {
        groups
            .par_iter()
            .map(|&group| conjectures::sweep_group(&cache, &sweep_grid, group))
            .collect()
    });
    let mut records = Vec::new();
    let mut truncated = false;
    for result in results? {
        match result {
            None => truncated = true,
            Some(group) => {
                records.extend(group.outcomes.iter().map(outcome_record));
                records.extend(group.ky.iter().flat_map(ky_records));
            }
        }
    }
    let doc = ReportDocument::assemble(records, started.elapsed().as_millis() as u64, truncated);
    emit(&doc, &output)?;
    eprintln!(
        "sweep: {} agree, {} disagree, {} guard-skipped{}",
        doc.summary.pass,
        doc.summary.fail,
        doc.summary.guard_skipped,
        if truncated { " (truncated)" } else { "" }
    );
    if truncated {
        return Ok(3);
    }
    Ok(if g.strict_conjectures && doc.summary.fail > 0 {
        1
    } else {
        0
    })
}

pub fn cache(action: CacheAction) -> Result<i32, CliError> {
    match action {
        CacheAction::Build { max, cache } => {
            let path = cachefile::resolve_path(cache);
            let table = cachefile::load(&path)?.unwrap_or_default();
            table.ensure(max)?;
            cachefile::store(&path, &table)?;
            let entries = table.even_entries();
            println!(
                "{}: {} records, max index {}",
                path.display(),
                entries.len(),
                entries.last().map(|(n, _)| *n).unwrap_or(0)
            );
        }
        CacheAction::Inspect { cache } => {
            let path = cachefile::resolve_path(cache);
            match cachefile::inspect(&path)? {
                None => println!("no cache at {}", path.display()),
                Some(info) => println!(
                    "{}: {} records, max index {}, sha256 {}",
                    path.display(),
                    info.records,
                    info.max_index,
                    info.sha256
                ),
            }
        }
        CacheAction::Clear { cache } => {
            let path = cachefile::resolve_path(cache);
            match std::fs::remove_file(&path) {
                Ok(()) => println!("removed {}", path.display()),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                    println!("no cache at {}", path.display())
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(0)
}
