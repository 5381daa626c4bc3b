//! Delay measurement for query evaluation.
//!
//! CSV layout (`event,index,elapsed_ns,delay_ns`):
//! one `preprocessing` row (planning, compilation, matching graph), one
//! `tuple` row per result with its time since enumeration began and the gap
//! to the previous tuple, then `max_delay` and `median_delay` rows. An empty
//! result yields the preprocessing row only.
//!
//! With several runs, `elapsed_ns` and preprocessing come from the first
//! run while `delay_ns` is the per-tuple minimum over all runs. The work
//! between two tuples is deterministic, so the minimum filters out
//! preemption and other interference that lands on random tuples.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use crate::model::Document;
use crate::query::{eval, PlanOptions, QueryError, RegexUCQ};

/// Small enough to stay below the allocator's mmap threshold.
const CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub preprocessing: Duration,
    /// Nanoseconds since enumeration began, one per tuple, of each run.
    pub runs: Vec<Vec<u64>>,
}

impl BenchReport {
    pub fn tuples(&self) -> usize {
        self.timestamps().len()
    }

    pub fn timestamps(&self) -> &[u64] {
        &self.runs[0]
    }

    /// Gap before each tuple, minimized over runs; the first gap is
    /// measured from enumeration start.
    pub fn delays(&self) -> Vec<u64> {
        let gaps = |run: &[u64]| -> Vec<u64> {
            let mut prev = 0;
            run.iter()
                .map(|&t| {
                    let d = t - prev;
                    prev = t;
                    d
                })
                .collect()
        };
        let mut best = gaps(self.timestamps());
        for run in &self.runs[1..] {
            for (b, d) in best.iter_mut().zip(gaps(run)) {
                *b = (*b).min(d);
            }
        }
        best
    }

    pub fn max_delay(&self) -> Option<u64> {
        self.delays().into_iter().max()
    }

    /// Lower median.
    pub fn median_delay(&self) -> Option<u64> {
        let mut d = self.delays();
        if d.is_empty() {
            return None;
        }
        let mid = (d.len() - 1) / 2;
        Some(*d.select_nth_unstable(mid).1)
    }

    pub fn total(&self) -> Duration {
        self.preprocessing + Duration::from_nanos(self.timestamps().last().copied().unwrap_or(0))
    }

    pub fn write_csv(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "event,index,elapsed_ns,delay_ns")?;
        writeln!(w, "preprocessing,,{},", self.preprocessing.as_nanos())?;
        for (i, (t, d)) in self.timestamps().iter().zip(self.delays()).enumerate() {
            writeln!(w, "tuple,{},{t},{d}", i + 1)?;
        }
        if let (Some(max), Some(median)) = (self.max_delay(), self.median_delay()) {
            writeln!(w, "max_delay,,,{max}")?;
            writeln!(w, "median_delay,,,{median}")?;
        }
        Ok(())
    }
}

/// Evaluates `q` on `d` `runs` times (at least once), recording when each
/// tuple is produced. Tuples are discarded after construction.
pub fn run_bench(
    q: &RegexUCQ,
    d: &Document,
    opts: &PlanOptions,
    runs: usize,
) -> Result<BenchReport, QueryError> {
    let mut preprocessing = None;
    let mut all = Vec::new();
    for _ in 0..runs.max(1) {
        let start = Instant::now();
        let stream = eval(q, d, opts)?;
        preprocessing.get_or_insert(start.elapsed());
        all.push(time_stream(stream));
    }
    debug_assert!(all.iter().all(|r| r.len() == all[0].len()));
    Ok(BenchReport {
        preprocessing: preprocessing.expect("at least one run"),
        runs: all,
    })
}

fn time_stream(stream: impl Iterator) -> Vec<u64> {
    // Chunked so that recording never triggers a large reallocation.
    let mut chunks: Vec<Vec<u64>> = vec![Vec::with_capacity(CHUNK)];
    let begin = Instant::now();
    for t in stream {
        let at = begin.elapsed().as_nanos() as u64;
        drop(t);
        let last = chunks.last_mut().expect("one chunk");
        if last.len() == CHUNK {
            let mut fresh = Vec::with_capacity(CHUNK);
            fresh.push(at);
            chunks.push(fresh);
        } else {
            last.push(at);
        }
    }
    chunks.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    #[test]
    fn csv_rows() {
        let q = parse_query("SELECT x FROM /a* x{a*} a*/").unwrap();
        let r = run_bench(&q, &Document::new("aaa"), &PlanOptions::default(), 1).unwrap();
        assert_eq!(r.tuples(), 10);
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 1 + 10 + 2);
        assert!(lines[1].starts_with("preprocessing,,"));
        assert!(lines[12].starts_with("max_delay,,,"));
    }

    #[test]
    fn empty_result_has_preprocessing_only() {
        let q = parse_query("SELECT x FROM /x{b}/").unwrap();
        let r = run_bench(&q, &Document::new("a"), &PlanOptions::default(), 1).unwrap();
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 2);
    }

    #[test]
    fn median_of_delays() {
        let r = BenchReport {
            preprocessing: Duration::ZERO,
            runs: vec![vec![5, 6, 10, 30], vec![9, 10, 13, 18]],
        };
        assert_eq!(r.delays(), vec![5, 1, 3, 5]);
        assert_eq!(r.timestamps(), &[5, 6, 10, 30]);
        assert_eq!(r.median_delay(), Some(3));
        assert_eq!(r.max_delay(), Some(5));
    }
}
