//! Benchmark grid runner, CSV rows and the scaling report built from them.
//!
//! # CSV schema
//!
//! One row per engine run, with a header row:
//!
//! | column | meaning |
//! |---|---|
//! | `n`, `m`, `k` | variables, clauses, clause width |
//! | `density_type` | `0.9N` or `xRootN` |
//! | `seed` | seed the instance was generated from |
//! | `run_index` | repeat number, from 0 |
//! | `wall_time_seconds` | time spent in the counting engine only |
//! | `solutions` | exact model count, decimal |
//! | `verdict` | `UNSAT`, `SAT` or `UNIQUE` |
//! | `overlap_count` | patterns stored beyond the clauses themselves |
//! | `overlap_ratio` | `overlap_count / m` |
//! | `pattern_store_size` | final number of stored patterns |
//! | `mean_merge_scan` | mean literals examined by merges that found a clash |
//! | `early_terminated` | the run stopped once every assignment was excluded |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::engine::{count_models, EngineConfig};
use crate::error::{Error, Result};
use crate::generator::{derive_seed, random_instance, ClauseWidth, DensityType, GenSpec};
use crate::model::Verdict;

impl Serialize for DensityType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DensityType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "UNSAT" => Ok(Verdict::Unsat),
            "SAT" => Ok(Verdict::Sat),
            "UNIQUE" => Ok(Verdict::Unique),
            other => Err(serde::de::Error::custom(format!(
                "unknown verdict {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: u32,
    pub m: usize,
    pub k: u32,
    pub density_type: DensityType,
    pub seed: u64,
    pub run_index: u32,
    pub wall_time_seconds: f64,
    pub solutions: String,
    pub verdict: Verdict,
    pub overlap_count: usize,
    pub overlap_ratio: f64,
    pub pattern_store_size: usize,
    pub mean_merge_scan: f64,
    pub early_terminated: bool,
}

/// Cartesian grid of variable counts, clause counts and density types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchGrid {
    pub ns: Vec<u32>,
    pub ms: Vec<usize>,
    pub densities: Vec<DensityType>,
}

impl BenchGrid {
    /// Small grid that runs in a few minutes on a laptop.
    pub fn desk() -> BenchGrid {
        BenchGrid {
            ns: vec![100, 200, 800],
            ms: vec![100, 1000, 2000],
            densities: DensityType::STANDARD.to_vec(),
        }
    }

    /// The full experimental grid. Sparse cells at large `m` can take hours.
    pub fn full() -> BenchGrid {
        BenchGrid {
            ns: vec![100, 200, 800, 5000, 20000],
            ms: vec![100, 1000, 10000, 100000],
            densities: DensityType::STANDARD.to_vec(),
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = (u32, usize, DensityType)> + '_ {
        self.ns.iter().flat_map(move |&n| {
            self.densities
                .iter()
                .flat_map(move |&dt| self.ms.iter().map(move |&m| (n, m, dt)))
        })
    }
}

fn parse_list<T: FromStr>(key: &str, values: &str) -> Result<Vec<T>> {
    values
        .split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::InvalidGrid(format!("bad value {v:?} for {key}")))
        })
        .collect()
}

impl FromStr for BenchGrid {
    type Err = Error;

    /// `desk`, `full`, or `n=100,200;m=100,1000;dt=0.9N,7RootN` (any key may
    /// be omitted; omitted keys take the desk values).
    fn from_str(s: &str) -> Result<BenchGrid> {
        match s.trim() {
            "desk" => return Ok(BenchGrid::desk()),
            "full" => return Ok(BenchGrid::full()),
            _ => {}
        }
        let mut grid = BenchGrid::desk();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, values) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidGrid(format!("expected key=values, got {part:?}")))?;
            match key.trim() {
                "n" => grid.ns = parse_list(key, values)?,
                "m" => grid.ms = parse_list(key, values)?,
                "dt" | "density" => grid.densities = parse_list(key, values)?,
                other => return Err(Error::InvalidGrid(format!("unknown key {other:?}"))),
            }
        }
        if grid.ns.is_empty() || grid.ms.is_empty() || grid.densities.is_empty() {
            return Err(Error::InvalidGrid("empty axis".into()));
        }
        Ok(grid)
    }
}

/// Seed of one grid cell and repeat; independent of grid order.
pub fn cell_seed(base: u64, n: u32, m: usize, dt: DensityType, run_index: u32) -> u64 {
    derive_seed(&[base, n as u64, m as u64, dt.code(), run_index as u64])
}

/// Generates and counts one instance, timing only the engine.
pub fn run_cell(
    n: u32,
    m: usize,
    dt: DensityType,
    seed: u64,
    run_index: u32,
    config: &EngineConfig,
) -> Result<BenchRow> {
    let spec = GenSpec {
        num_vars: n,
        num_clauses: m,
        width: ClauseWidth::Density(dt),
        seed,
    };
    let k = spec.k()?;
    let formula = random_instance(&spec)?;
    let config = config.clone().with_stats();
    let start = Instant::now();
    let count = count_models(&formula, &config)?;
    let elapsed = start.elapsed().as_secs_f64().max(1e-9);
    let stats = count.stats.expect("stats were requested");
    Ok(BenchRow {
        n,
        m,
        k,
        density_type: dt,
        seed,
        run_index,
        wall_time_seconds: elapsed,
        solutions: count.solutions.to_string(),
        verdict: count.verdict,
        overlap_count: stats.overlap_count,
        overlap_ratio: stats.overlap_ratio(m),
        pattern_store_size: stats.pattern_store_size,
        mean_merge_scan: stats.mean_merge_scan(),
        early_terminated: stats.early_terminated,
    })
}

/// Runs every cell `repeats` times, handing each row to `sink` as it completes.
pub fn run_grid(
    grid: &BenchGrid,
    repeats: u32,
    base_seed: u64,
    config: &EngineConfig,
    mut sink: impl FnMut(&BenchRow) -> Result<()>,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for (n, m, dt) in grid.cells() {
        for run in 0..repeats {
            let row = run_cell(n, m, dt, cell_seed(base_seed, n, m, dt, run), run, config)?;
            sink(&row)?;
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Appends rows to a CSV stream, writing the header before the first row.
pub struct CsvSink<W: io::Write>(csv::Writer<W>);

impl<W: io::Write> CsvSink<W> {
    pub fn new(out: W) -> CsvSink<W> {
        CsvSink(csv::Writer::from_writer(out))
    }

    pub fn write(&mut self, row: &BenchRow) -> Result<()> {
        self.0.serialize(row)?;
        self.0.flush().map_err(|e| Error::Csv(e.to_string()))
    }
}

pub fn write_rows<W: io::Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))
}

pub fn read_rows<R: io::Read>(input: R) -> Result<Vec<BenchRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Lower and upper factor applied to a predicted ratio.
pub const COMPATIBILITY_BAND: (f64, f64) = (0.5, 2.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Absent,
    Ratio {
        measured: f64,
        expected: f64,
        compatible: bool,
    },
}

impl Cell {
    pub fn ratio(measured: f64, expected: f64) -> Cell {
        let (lo, hi) = COMPATIBILITY_BAND;
        Cell::Ratio {
            measured,
            expected,
            compatible: measured >= lo * expected && measured <= hi * expected,
        }
    }

    pub fn is_compatible(&self) -> Option<bool> {
        match self {
            Cell::Absent => None,
            Cell::Ratio { compatible, .. } => Some(*compatible),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Absent => f.write_str("absent"),
            Cell::Ratio {
                measured,
                expected,
                compatible,
            } => write!(
                f,
                "{measured:.3} vs {expected:.3} ({})",
                if *compatible { "yes" } else { "no" }
            ),
        }
    }
}

/// Time growth between two consecutive clause counts, expected quadratic.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseScaling {
    pub density_type: DensityType,
    pub n: u32,
    pub m_low: usize,
    pub m_high: Option<usize>,
    pub cell: Cell,
}

/// Time relative to the `0.9N` baseline at the same `n` and `m`, expected `n/k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityScaling {
    pub density_type: DensityType,
    pub n: u32,
    pub m: usize,
    pub k: u32,
    pub cell: Cell,
}

/// Mean literals examined per clashing merge against the `2n/k` estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeScan {
    pub density_type: DensityType,
    pub n: u32,
    pub k: u32,
    pub mean_merge_scan: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalingReport {
    pub clause_scaling: Vec<ClauseScaling>,
    pub density_scaling: Vec<DensityScaling>,
    pub merge_scan: Vec<MergeScan>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Aggregates rows by mean per cell and compares the growth rates with the
/// quadratic-in-`m` and linear-in-`n/k` predictions.
pub fn scaling_report(rows: &[BenchRow]) -> ScalingReport {
    type Key = (DensityType, u32, usize);
    let mut times: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
    let mut widths: BTreeMap<(DensityType, u32), u32> = BTreeMap::new();
    for r in rows {
        times
            .entry((r.density_type, r.n, r.m))
            .or_default()
            .push(r.wall_time_seconds);
        widths.insert((r.density_type, r.n), r.k);
    }
    let avg = |key: &Key| times.get(key).and_then(|t| mean(t.iter().copied()));

    let mut report = ScalingReport::default();
    for (&(dt, n), &k) in &widths {
        let ms: BTreeSet<usize> = times
            .keys()
            .filter(|(d, nn, _)| *d == dt && *nn == n)
            .map(|&(_, _, m)| m)
            .collect();
        let ms: Vec<usize> = ms.into_iter().collect();
        if ms.len() < 2 {
            report.clause_scaling.push(ClauseScaling {
                density_type: dt,
                n,
                m_low: ms[0],
                m_high: None,
                cell: Cell::Absent,
            });
        }
        for pair in ms.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let expected = (hi as f64 / lo as f64).powi(2);
            let measured = avg(&(dt, n, hi)).unwrap() / avg(&(dt, n, lo)).unwrap();
            report.clause_scaling.push(ClauseScaling {
                density_type: dt,
                n,
                m_low: lo,
                m_high: Some(hi),
                cell: Cell::ratio(measured, expected),
            });
        }

        if dt != DensityType::NinetyPercent {
            for &m in &ms {
                let cell = match avg(&(DensityType::NinetyPercent, n, m)) {
                    Some(base) => {
                        Cell::ratio(avg(&(dt, n, m)).unwrap() / base, n as f64 / k as f64)
                    }
                    None => Cell::Absent,
                };
                report.density_scaling.push(DensityScaling {
                    density_type: dt,
                    n,
                    m,
                    k,
                    cell,
                });
            }
        }

        let scans = rows
            .iter()
            .filter(|r| r.density_type == dt && r.n == n)
            .map(|r| r.mean_merge_scan);
        if let Some(mean_merge_scan) = mean(scans) {
            report.merge_scan.push(MergeScan {
                density_type: dt,
                n,
                k,
                mean_merge_scan,
                estimate: 2.0 * n as f64 / k as f64,
            });
        }
    }
    report
}

impl fmt::Display for ScalingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "time(m_high) / time(m_low), expected (m_high/m_low)^2")?;
        for c in &self.clause_scaling {
            let hi = c.m_high.map_or_else(|| "-".to_string(), |m| m.to_string());
            writeln!(
                f,
                "  {:<8} n={:<6} m={}->{}: {}",
                c.density_type.to_string(),
                c.n,
                c.m_low,
                hi,
                c.cell
            )?;
        }
        writeln!(f, "time / time(0.9N), expected n/k")?;
        for c in &self.density_scaling {
            writeln!(
                f,
                "  {:<8} n={:<6} m={:<7} k={:<6}: {}",
                c.density_type.to_string(),
                c.n,
                c.m,
                c.k,
                c.cell
            )?;
        }
        writeln!(f, "mean merge scan vs 2n/k")?;
        for s in &self.merge_scan {
            writeln!(
                f,
                "  {:<8} n={:<6} k={:<6}: {:.3} vs {:.3}",
                s.density_type.to_string(),
                s.n,
                s.k,
                s.mean_merge_scan,
                s.estimate
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(dt: DensityType, n: u32, m: usize, t: f64) -> BenchRow {
        BenchRow {
            n,
            m,
            k: dt.width(n),
            density_type: dt,
            seed: 0,
            run_index: 0,
            wall_time_seconds: t,
            solutions: "1".into(),
            verdict: Verdict::Unique,
            overlap_count: 0,
            overlap_ratio: 0.0,
            pattern_store_size: m,
            mean_merge_scan: 2.0,
            early_terminated: false,
        }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!("desk".parse::<BenchGrid>().unwrap(), BenchGrid::desk());
        let g: BenchGrid = "n=100; m=100,1000; dt=0.9N".parse().unwrap();
        assert_eq!(g.ns, [100]);
        assert_eq!(g.ms, [100, 1000]);
        assert_eq!(g.densities, [DensityType::NinetyPercent]);
        assert_eq!(g.cells().count(), 2);
        assert!("n=abc".parse::<BenchGrid>().is_err());
        assert!("q=1".parse::<BenchGrid>().is_err());
        assert!("n".parse::<BenchGrid>().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            row(DensityType::NinetyPercent, 100, 100, 0.5),
            row(DensityType::RootN(7), 100, 100, 1.5),
        ];
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,m,k,density_type,seed,run_index,wall_time_seconds,"));
        assert!(text.contains(",7RootN,"));
        assert_eq!(read_rows(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn clause_scaling_bands() {
        let dt = DensityType::NinetyPercent;
        let rows = [row(dt, 100, 100, 0.01), row(dt, 100, 1000, 0.96)];
        let r = scaling_report(&rows);
        assert_eq!(r.clause_scaling.len(), 1);
        assert_eq!(r.clause_scaling[0].cell.is_compatible(), Some(true));

        let dt = DensityType::RootN(3);
        let rows = [row(dt, 100, 100, 0.01), row(dt, 100, 1000, 5.0)];
        assert_eq!(
            scaling_report(&rows).clause_scaling[0].cell.is_compatible(),
            Some(false)
        );
    }

    #[test]
    fn single_level_is_absent() {
        let dt = DensityType::RootN(7);
        let r = scaling_report(&[row(dt, 800, 1000, 0.1)]);
        assert_eq!(r.clause_scaling[0].cell, Cell::Absent);
        assert_eq!(r.density_scaling[0].cell, Cell::Absent);
    }

    #[test]
    fn density_scaling_against_baseline() {
        let rows = [
            row(DensityType::NinetyPercent, 800, 1000, 0.014),
            row(DensityType::RootN(7), 800, 1000, 0.07),
        ];
        let r = scaling_report(&rows);
        let cell = r.density_scaling[0].cell;
        let Cell::Ratio {
            measured, expected, ..
        } = cell
        else {
            panic!("expected a ratio");
        };
        assert!((measured - 5.0).abs() < 1e-9);
        assert!((expected - 800.0 / 197.0).abs() < 1e-9);
        assert_eq!(cell.is_compatible(), Some(true));
        assert!(r.to_string().contains("7RootN"));
    }

    #[test]
    fn grid_reruns_are_reproducible() {
        let grid: BenchGrid = "n=60;m=20,40;dt=0.9N,3RootN".parse().unwrap();
        let cfg = EngineConfig::default();
        let a = run_grid(&grid, 2, 9, &cfg, |_| Ok(())).unwrap();
        let b = run_grid(&grid, 2, 9, &cfg, |_| Ok(())).unwrap();
        assert_eq!(a.len(), 8);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(
                (&x.solutions, x.overlap_count, x.pattern_store_size, x.seed),
                (&y.solutions, y.overlap_count, y.pattern_store_size, y.seed)
            );
            assert!(x.wall_time_seconds > 0.0);
        }
        assert_ne!(a[0].seed, a[1].seed);
    }
}
